#pragma once

#include "kinetics.hpp"

namespace demag {

enum class EtaObjective {
  efficiency,    // instantaneous chi = (d ln rho/dt) / (-d ln N/dt)
  cooling_rate,  // -dT/dt
};

/// The servo target ratio and the scattering-rate window live in PumpParams.
struct ControllerConfig {
  double eta_min = 0.2;
  double eta_max = 10.0;
  double optimizer_tol = 1e-3;
  EtaObjective objective = EtaObjective::efficiency;
  // Proportional pull of N2/N1 back to the target inside the +-10% band.
  double servo_gain = 5.0;  // 1/s

  void validate() const;
  friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

/// Scattering rate that holds N2/N1 at the pump target for the current
/// dipolar flow. Outside a +-10% band around the target the rate is
/// switched to whichever bound restores the ratio fastest.
double servo_gamma(const GasState& state, double field, const ModelParams& params,
                   const ControllerConfig& config);

/// d(N2/N1)/dt for the given controls.
double ratio_rate(const GasState& state, const ControlState& control, const ModelParams& params);

struct ControlChoice {
  double eta = 0.0;
  ControlState control;
  double objective = 0.0;
};

/// Value of the configured objective at eta, with the servo engaged.
ControlChoice evaluate_eta(const GasState& state, double eta, const ModelParams& params,
                           const ControllerConfig& config);

/// Maximises the objective over [eta_min, eta_max] by golden section.
ControlChoice optimize_eta(const GasState& state, const ModelParams& params,
                           const ControllerConfig& config);

}  // namespace demag
