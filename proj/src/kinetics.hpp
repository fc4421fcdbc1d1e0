#pragma once

#include "collision_kernel.hpp"
#include "constants.hpp"
#include "core_model.hpp"

namespace demag {

struct ModelParams {
  SpeciesModel species;
  TrapPotential trap = HarmonicTrap{2.0 * constants::pi * 500.0};
  LossParams loss;
  PumpParams pump;
  CrossSectionModel xsec;
  RateMethod rate_method = RateMethod::closed_form;

  void validate() const;
};

struct LossRates {
  double background = 0.0;   // 1/s, <= 0
  double three_body = 0.0;   // 1/s, <= 0
  double total() const { return background + three_body; }
};

/// Dipolar relaxation between the two lowest sublevels.
/// Sign convention: ndot_r is the change of N1 caused by relaxation, so it
/// is negative while the cloud depolarises, and edot_dip = dE_Z * ndot_r is
/// the kinetic-energy change (negative = cooling).
struct DipolarExchange {
  double ndot_r = 0.0;        // 1/s
  double edot_dip = 0.0;      // W
  double one_way = 0.0;       // 1/s, gross 1 -> 2 flow
};

struct PumpRates {
  double dn1 = 0.0;       // 1/s; dN2 from pumping is -dn1
  double edot_pol = 0.0;  // W
};

struct Derivatives {
  double dn1 = 0.0;
  double dn2 = 0.0;
  double dt = 0.0;  // K/s

  LossRates loss;
  DipolarExchange exchange;
  PumpRates pump;
  double edot_loss = 0.0;  // W
};

LossRates loss_rates(const GasState& state, const ModelParams& params);

/// 3 k T Ndot_bg + 2 k T Ndot_3b; the coefficients hold for a 3D harmonic trap only.
double loss_energy_rate(const GasState& state, const LossRates& rates, const TrapPotential& trap);

DipolarExchange dipolar_exchange(const GasState& state, double field, const ModelParams& params);
DipolarExchange dipolar_exchange(const GasState& state, double field, const RateConstants& k,
                                 double vbar);

PumpRates pump_rates(const GasState& state, double gamma_sc, const ModelParams& params);

Derivatives derivative(const GasState& state, const ControlState& control, const ModelParams& params);

/// d ln(rho)/dt implied by a set of derivatives.
double log_psd_rate(const GasState& state, const Derivatives& d, const TrapPotential& trap);

}  // namespace demag
