#include <cmath>
#include <random>

#include "controller.hpp"
#include "doctest.h"

using namespace demag;

namespace {

ModelParams reference_params() {
  ModelParams p;
  p.loss = {200.0, 1e-41};
  return p;
}

}  // namespace

TEST_SUITE("controller") {
  TEST_CASE("servo against an independent evaluation") {
    const auto p = reference_params();
    const GasState s{4.9e6, 4.9e6 * 0.0205, 100e-6};
    CHECK(servo_gamma(s, 1.2e-4, p, ControllerConfig{}) == doctest::Approx(31.835394251856236).epsilon(1e-10));
  }

  TEST_CASE("no flips at the pump fixed point returns the minimum rate") {
    auto p = reference_params();
    p.pump.impurity = p.pump.target_ratio * (1.0 - p.species.kappa);
    const double n1 = 1e6;
    const GasState s{n1, n1 * p.pump.target_ratio, 1e-5};
    CHECK(servo_gamma(s, field_for_eta(500.0, s.temperature), p, ControllerConfig{}) == p.pump.gamma_min);
  }

  TEST_CASE("the servo output is clamped to the rate window") {
    auto p = reference_params();
    p.pump.gamma_max = 40.0;
    const GasState s{5e6, 5e6 * 0.02, 200e-6};
    CHECK(servo_gamma(s, field_for_eta(0.2, s.temperature), p, ControllerConfig{}) == 40.0);
  }

  TEST_CASE("outside the band the servo picks the bound that restores the ratio") {
    const auto p = reference_params();
    const double t = 5e-5, b = field_for_eta(1.3, t);
    auto fastest = [&](const GasState& s, bool raise) {
      const double lo = ratio_rate(s, {b, p.pump.gamma_min}, p);
      const double hi = ratio_rate(s, {b, p.pump.gamma_max}, p);
      return (raise ? hi > lo : hi < lo) ? p.pump.gamma_max : p.pump.gamma_min;
    };
    // Below the pump fixed point N2/N1 = p/(1-kappa), pumping itself feeds state 2.
    const GasState empty{1e6, 0.0, t};
    CHECK(servo_gamma(empty, b, p, ControllerConfig{}) == p.pump.gamma_max);
    CHECK(fastest(empty, true) == p.pump.gamma_max);
    // Between the fixed point and the band, only the flips can raise the ratio.
    const GasState low{1e6, 1e4, t};
    CHECK(servo_gamma(low, b, p, ControllerConfig{}) == p.pump.gamma_min);
    CHECK(fastest(low, true) == p.pump.gamma_min);
    const GasState high{1e6, 1e5, t};
    CHECK(servo_gamma(high, b, p, ControllerConfig{}) == p.pump.gamma_max);
    CHECK(fastest(high, false) == p.pump.gamma_max);
  }

  TEST_CASE("mid-regime servo zeroes the ratio drift at the target") {
    auto p = reference_params();
    ControllerConfig cfg;
    const GasState s{3e6, 3e6 * p.pump.target_ratio, 20e-6};
    const double b = field_for_eta(2.0, s.temperature);
    const double g = servo_gamma(s, b, p, cfg);
    CHECK(g > p.pump.gamma_min);
    CHECK(g < p.pump.gamma_max);
    const double drift = ratio_rate(s, {b, g}, p);
    const double scale = ratio_rate(s, {b, 0.0}, p);
    CHECK(std::abs(drift) <= 1e-9 * std::abs(scale));
    // Idempotent: evaluating twice gives the same rate.
    CHECK(servo_gamma(s, b, p, cfg) == g);
  }

  TEST_CASE("optimiser stays in bounds and beats random cutoffs") {
    const auto p = reference_params();
    ControllerConfig cfg;
    const GasState s{4.5e6, 9e4, 50e-6};
    const auto best = optimize_eta(s, p, cfg);
    CHECK(best.eta >= cfg.eta_min);
    CHECK(best.eta <= cfg.eta_max);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> eta(cfg.eta_min, cfg.eta_max);
    for (int i = 0; i < 100; ++i)
      CHECK(best.objective >= evaluate_eta(s, eta(rng), p, cfg).objective - 1e-9 * std::abs(best.objective));
  }

  TEST_CASE("without pump heating and with eta-independent losses the optimum is the analytic one") {
    auto p = reference_params();
    p.loss = {200.0, 0.0};
    p.species.pump_wavelength = 1.0;  // recoil energy negligible
    p.pump.impurity = 0.0;
    ControllerConfig cfg;
    cfg.objective = EtaObjective::efficiency;
    const GasState s{5e6, 0.0, 100e-6};
    const auto best = optimize_eta(s, p, cfg);
    CHECK(std::abs(best.eta - optimal_eta(p.species.spin)) <= 2.0 * cfg.optimizer_tol);
    cfg.objective = EtaObjective::cooling_rate;
    CHECK(std::abs(optimize_eta(s, p, cfg).eta - optimal_eta(p.species.spin)) <= 2.0 * cfg.optimizer_tol);
  }

  TEST_CASE("config validation") {
    ControllerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.eta_min = 5.0;
    cfg.eta_max = 1.0;
    CHECK_THROWS(cfg.validate());
  }
}
