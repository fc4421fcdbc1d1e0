#include "integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace demag {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0 && abs_tol_atoms > 0.0 && abs_tol_temperature > 0.0))
    throw std::invalid_argument("integrator: tolerances must be > 0");
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
    throw std::invalid_argument("integrator: need 0 < dt_min <= dt_init <= dt_max");
  if (!(t_max > 0.0 && std::isfinite(t_max))) throw std::invalid_argument("integrator: t_max must be > 0");
  if (!(temperature_floor >= 0.0 && atom_floor >= 0.0 && stall_time > 0.0))
    throw std::invalid_argument("integrator: termination thresholds out of range");
  if (max_rows < 2) throw std::invalid_argument("integrator: max_rows must be >= 2");
}

namespace {

using Vec = std::array<double, 3>;

Vec to_vec(const GasState& s) { return {s.n1, s.n2, s.temperature}; }
GasState to_state(const Vec& v) { return {v[0], v[1], v[2]}; }

Vec rhs(const Vec& y, const ControlState& control, const ModelParams& params) {
  const auto d = derivative(to_state(y), control, params);
  return {d.dn1, d.dn2, d.dt};
}

// Dormand & Prince (1980) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

StepResult dormand_prince_step(const GasState& state, const ControlState& control,
                               const ModelParams& params, double dt, const IntegratorConfig& config) {
  StepResult out{state, kInf, false};
  const Vec y = to_vec(state);
  auto stage = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec s = y;
    for (const auto& [coef, k] : terms)
      for (int i = 0; i < 3; ++i) s[i] += dt * coef * (*k)[i];
    return s;
  };
  try {
    const Vec k1 = rhs(y, control, params);
    const Vec k2 = rhs(stage({{a21, &k1}}), control, params);
    const Vec k3 = rhs(stage({{a31, &k1}, {a32, &k2}}), control, params);
    const Vec k4 = rhs(stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}), control, params);
    const Vec k5 = rhs(stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), control, params);
    const Vec k6 = rhs(stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), control, params);
    Vec y5 = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec k7 = rhs(y5, control, params);

    const std::array<double, 3> atol{config.abs_tol_atoms, config.abs_tol_atoms, config.abs_tol_temperature};
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double err =
          dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = atol[i] + config.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      norm = std::max(norm, std::abs(err) / scale);
    }
    if (!std::isfinite(norm)) return out;
    for (int i = 0; i < 2; ++i) {
      if (y5[i] < 0.0) {
        if (y5[i] < -config.abs_tol_atoms) return out;
        y5[i] = 0.0;
        out.clamped = true;
      }
    }
    if (!(y5[2] > 0.0) || !(y5[0] + y5[1] > 0.0)) return out;
    out.state = to_state(y5);
    out.error_norm = norm;
  } catch (const std::invalid_argument&) {
    // An intermediate stage left the physical domain; reject the step.
  }
  return out;
}

Advance adaptive_step(const GasState& state, const ControlState& control, const ModelParams& params,
                      double dt_try, const IntegratorConfig& config) {
  double dt = std::min(dt_try, config.dt_max);
  for (;;) {
    if (dt < config.dt_min * (1.0 - 1e-12))
      throw NumericalError("step size fell below dt_min without an accepted step");
    const auto r = dormand_prince_step(state, control, params, dt, config);
    const double err = r.error_norm;
    if (r.accepted()) {
      const double grow = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      return {r.state, dt, std::min(dt * grow, config.dt_max), err, r.clamped};
    }
    const double shrink = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.2;
    const double next = dt * shrink;
    dt = (next < config.dt_min && dt > config.dt_min) ? config.dt_min : next;
  }
}

GasState integrate_fixed(GasState state, const ControlState& control, const ModelParams& params,
                         double duration, const IntegratorConfig& config) {
  double t = 0.0;
  double dt = config.dt_init;
  while (t < duration) {
    const double remaining = duration - t;
    const bool last = dt >= remaining;
    auto cfg = config;
    cfg.dt_min = std::min(cfg.dt_min, remaining);
    const auto adv = adaptive_step(state, control, params, last ? remaining : dt, cfg);
    state = adv.state;
    t = (last && adv.dt_used == remaining) ? duration : t + adv.dt_used;
    dt = adv.dt_next;
  }
  return state;
}

}  // namespace demag
