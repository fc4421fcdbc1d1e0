#include "controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "golden_section.hpp"

namespace demag {

void ControllerConfig::validate() const {
  if (!(eta_min > 0.0 && eta_min < eta_max && std::isfinite(eta_max)))
    throw std::invalid_argument("controller: need 0 < eta_min < eta_max");
  if (!(optimizer_tol > 0.0)) throw std::invalid_argument("controller: optimizer_tol must be > 0");
  if (!(servo_gain >= 0.0 && std::isfinite(servo_gain)))
    throw std::invalid_argument("controller: servo_gain must be >= 0");
}

double servo_gamma(const GasState& state, double field, const ModelParams& params,
                   const ControllerConfig& config) {
  const auto& pump = params.pump;
  const double n1 = state.n1, n2 = state.n2, n = state.total();
  // Pumping moves atoms 2 -> 1 at rate slope * Gamma.
  const double slope = (1.0 - params.species.kappa) * n2 - pump.impurity * n1;
  if (n1 <= 0.0) return slope > 0.0 ? pump.gamma_max : pump.gamma_min;

  const double ratio = n2 / n1;
  const double target = pump.target_ratio;
  if (std::abs(ratio - target) > 0.1 * target) {
    if (slope == 0.0) return pump.gamma_min;
    const bool need_more_pumping = ratio > target;
    return (slope > 0.0) == need_more_pumping ? pump.gamma_max : pump.gamma_min;
  }

  // d(N2/N1)/dt = -(N/N1^2) (ndot_r + slope * Gamma)
  const double ndot_r = dipolar_exchange(state, field, params).ndot_r;
  const double wanted = -config.servo_gain * (ratio - target);
  const double pumped = -ndot_r - wanted * n1 * n1 / n;
  if (slope == 0.0) return pump.gamma_min;
  const double gamma = pumped / slope;
  if (!std::isfinite(gamma)) return pump.gamma_min;
  return std::clamp(gamma, pump.gamma_min, pump.gamma_max);
}

double ratio_rate(const GasState& state, const ControlState& control, const ModelParams& params) {
  const auto d = derivative(state, control, params);
  return (state.n1 * d.dn2 - state.n2 * d.dn1) / (state.n1 * state.n1);
}

ControlChoice evaluate_eta(const GasState& state, double eta, const ModelParams& params,
                           const ControllerConfig& config) {
  ControlChoice choice;
  choice.eta = eta;
  choice.control.field = field_for_eta(eta, state.temperature);
  choice.control.gamma_sc = servo_gamma(state, choice.control.field, params, config);
  const auto d = derivative(state, choice.control, params);
  if (config.objective == EtaObjective::cooling_rate) {
    choice.objective = -d.dt;
    return choice;
  }
  const double dln_n = (d.dn1 + d.dn2) / state.total();
  const double dln_rho = log_psd_rate(state, d, params.trap);
  choice.objective = std::abs(dln_n) < 1e-12 ? dln_rho : dln_rho / (-dln_n);
  return choice;
}

ControlChoice optimize_eta(const GasState& state, const ModelParams& params,
                           const ControllerConfig& config) {
  const auto best = golden_section_maximize(
      [&](double eta) { return evaluate_eta(state, eta, params, config).objective; },
      config.eta_min, config.eta_max, config.optimizer_tol);
  return evaluate_eta(state, best.x, params, config);
}

}  // namespace demag
