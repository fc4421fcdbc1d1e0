#include "kinetics.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace demag {

namespace c = constants;

void ModelParams::validate() const {
  species.validate();
  demag::validate(trap);
  loss.validate();
  pump.validate();
  if (xsec.kind == CrossSectionModel::Kind::symmetry_function && !xsec.table)
    throw std::invalid_argument("symmetry-function cross-section model needs a table");
}

LossRates loss_rates(const GasState& state, const ModelParams& params) {
  const double n = state.total();
  const double vbar = mean_volume(params.trap, state.temperature, params.species.mass);
  return {-n / params.loss.tau_bg, -params.loss.l3b * n * n * n / (vbar * vbar)};
}

double loss_energy_rate(const GasState& state, const LossRates& rates, const TrapPotential& trap) {
  if (!is_harmonic(trap))
    throw std::invalid_argument("loss energy balance is only defined for a harmonic trap");
  const double kt = c::k_B * state.temperature;
  return 3.0 * kt * rates.background + 2.0 * kt * rates.three_body;
}

DipolarExchange dipolar_exchange(const GasState& state, double field, const RateConstants& k,
                                 double vbar) {
  const double n1 = state.n1, n2 = state.n2;
  // Mixed 1-2 pairs promote the state-1 partner or demote the state-2
  // partner with the same constants as the same-state channels.
  const double forward = (k.ssf_fwd * (n1 * n1 + n1 * n2) + 2.0 * k.dsf_fwd * n1 * n1) / vbar;
  const double backward = (k.ssf_bwd * (n1 * n2 + n2 * n2) + 2.0 * k.dsf_bwd * n2 * n2) / vbar;
  const double ndot_r = backward - forward;
  return {ndot_r, zeeman_splitting(field) * ndot_r, forward};
}

DipolarExchange dipolar_exchange(const GasState& state, double field, const ModelParams& params) {
  const double vbar = mean_volume(params.trap, state.temperature, params.species.mass);
  const auto k = rate_constants(state.temperature, field, params.species, params.xsec, params.rate_method);
  return dipolar_exchange(state, field, k, vbar);
}

PumpRates pump_rates(const GasState& state, double gamma_sc, const ModelParams& params) {
  const double p = params.pump.impurity;
  const double kappa = params.species.kappa;
  const double dn1 = ((1.0 - kappa) * state.n2 - p * state.n1) * gamma_sc;
  const double edot = (p * state.n1 + state.n2) * recoil_energy(params.species) * gamma_sc;
  return {dn1, edot};
}

Derivatives derivative(const GasState& state, const ControlState& control, const ModelParams& params) {
  state.validate();
  control.validate();
  Derivatives d;
  d.loss = loss_rates(state, params);
  d.edot_loss = loss_energy_rate(state, d.loss, params.trap);
  d.exchange = dipolar_exchange(state, control.field, params);
  d.pump = pump_rates(state, control.gamma_sc, params);

  const double n = state.total();
  const double ndot = d.loss.total();
  d.dn1 = d.exchange.ndot_r + ndot * state.n1 / n + d.pump.dn1;
  d.dn2 = -d.exchange.ndot_r + ndot * state.n2 / n - d.pump.dn1;

  const double heat_capacity = (1.5 + alpha(params.trap)) * c::k_B;
  const double edot = d.exchange.edot_dip + d.edot_loss + d.pump.edot_pol;
  d.dt = (edot - heat_capacity * state.temperature * ndot) / (heat_capacity * n);
  return d;
}

double log_psd_rate(const GasState& state, const Derivatives& d, const TrapPotential& trap) {
  return (d.dn1 + d.dn2) / state.total() - (1.5 + alpha(trap)) * d.dt / state.temperature;
}

}  // namespace demag
