#include "core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "constants.hpp"

namespace demag {

namespace c = constants;

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SpeciesModel::validate() const {
  require(std::isfinite(mass) && mass > 0.0, "species.mass must be > 0");
  require(std::isfinite(spin) && spin >= 0.5, "species.spin must be >= 1/2");
  require(std::abs(2.0 * spin - std::round(2.0 * spin)) < 1e-9,
          "species.spin must be an integer or half-integer");
  require(std::isfinite(pump_wavelength) && pump_wavelength > 0.0,
          "species.pump_wavelength must be > 0");
  require(kappa >= 0.0 && kappa < 1.0, "species.kappa must lie in [0, 1)");
}

void validate(const TrapPotential& trap) {
  if (const auto* h = std::get_if<HarmonicTrap>(&trap)) {
    require(std::isfinite(h->mean_angular_frequency) && h->mean_angular_frequency > 0.0,
            "trap.mean_frequency must be > 0");
    return;
  }
  const auto& p = std::get<PowerLawTrap>(trap);
  for (int j = 0; j < 3; ++j) {
    require(std::isfinite(p.exponents[j]) && p.exponents[j] >= 1.0,
            "trap.exponents must be >= 1");
    require(std::isfinite(p.coefficients[j]) && p.coefficients[j] > 0.0,
            "trap.coefficients must be > 0");
  }
}

bool is_harmonic(const TrapPotential& trap) {
  return std::holds_alternative<HarmonicTrap>(trap);
}

void GasState::validate() const {
  require(n1 >= 0.0 && n2 >= 0.0, "populations must be non-negative");
  require(n1 + n2 > 0.0, "total atom number must be positive");
  require(temperature > 0.0 && std::isfinite(temperature), "temperature must be > 0");
}

void ControlState::validate() const {
  require(field >= 0.0, "magnetic field must be >= 0");
  require(gamma_sc >= 0.0, "scattering rate must be >= 0");
}

void LossParams::validate() const {
  require(tau_bg > 0.0, "loss.background_lifetime must be > 0");
  require(std::isfinite(l3b) && l3b >= 0.0, "loss.three_body_rate must be >= 0");
}

void PumpParams::validate() const {
  require(impurity >= 0.0 && impurity < 1.0, "pump.polarization_impurity must lie in [0, 1)");
  require(target_ratio > 0.0 && target_ratio < 1.0, "pump.target_ratio must lie in (0, 1)");
  require(gamma_min > 0.0 && gamma_min <= gamma_max && std::isfinite(gamma_max),
          "pump scattering-rate window must satisfy 0 < gamma_min <= gamma_max");
}

double alpha(const TrapPotential& trap) {
  if (is_harmonic(trap)) return 1.5;
  const auto& p = std::get<PowerLawTrap>(trap);
  return 1.0 / p.exponents[0] + 1.0 / p.exponents[1] + 1.0 / p.exponents[2];
}

double zeeman_splitting(double field) { return 2.0 * c::mu_B * field; }

double eta_b(double field, double temperature) {
  require(temperature > 0.0, "eta_b: temperature must be > 0");
  return zeeman_splitting(field) / (c::k_B * temperature);
}

double field_for_eta(double eta, double temperature) {
  require(temperature > 0.0, "field_for_eta: temperature must be > 0");
  return eta * c::k_B * temperature / (2.0 * c::mu_B);
}

double mean_volume(const TrapPotential& trap, double temperature, double mass) {
  require(temperature > 0.0, "mean_volume: temperature must be > 0");
  const double kt = c::k_B * temperature;
  if (const auto* h = std::get_if<HarmonicTrap>(&trap)) {
    const double edge = std::sqrt(4.0 * c::pi * kt) / (h->mean_angular_frequency * std::sqrt(mass));
    return edge * edge * edge;
  }
  const auto& p = std::get<PowerLawTrap>(trap);
  double v = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double inv_n = 1.0 / p.exponents[j];
    v *= 2.0 * std::tgamma(1.0 + inv_n) * std::pow(2.0 * kt / p.coefficients[j], inv_n);
  }
  return v;
}

double peak_density(double atoms, double vbar) { return atoms / vbar; }

double phase_space_density(double n0, double temperature, const SpeciesModel& species) {
  const double lambda_sq =
      2.0 * c::pi * c::hbar * c::hbar / (species.mass * c::k_B * temperature);
  return n0 * std::pow(lambda_sq, 1.5);
}

double recoil_energy(const SpeciesModel& species) {
  const double k = 2.0 * c::pi / species.pump_wavelength;
  return k * k * c::hbar * c::hbar / (2.0 * species.mass);
}

double recoil_temperature(const SpeciesModel& species) {
  return recoil_energy(species) / c::k_B;
}

double pump_energy(const SpeciesModel& species) {
  require(species.kappa < 1.0, "pump_energy: kappa must be < 1");
  return recoil_energy(species) / (1.0 - species.kappa);
}

double total_energy(const GasState& state, const TrapPotential& trap) {
  return (1.5 + alpha(trap)) * state.total() * c::k_B * state.temperature;
}

}  // namespace demag
