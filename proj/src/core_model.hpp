#pragma once

#include <array>
#include <variant>

namespace demag {

/// Static atomic data. Defaults describe chromium-52 pumped on the
/// 7S3 -> 7P3 line, with kappa the decay branching from the stretched
/// excited state back into |m_S = -S + 1>.
struct SpeciesModel {
  double mass = 51.9405 * 1.66053906660e-27;  // kg
  double spin = 3.0;
  double pump_wavelength = 427.60e-9;  // m
  double kappa = 0.25;

  void validate() const;
  friend bool operator==(const SpeciesModel&, const SpeciesModel&) = default;
};

struct HarmonicTrap {
  double mean_angular_frequency = 0.0;  // rad/s
  friend bool operator==(const HarmonicTrap&, const HarmonicTrap&) = default;
};

/// U = sum_j c_j |x_j|^{n_j}
struct PowerLawTrap {
  std::array<double, 3> exponents{2.0, 2.0, 2.0};
  std::array<double, 3> coefficients{1.0, 1.0, 1.0};  // J/m^{n_j}
  friend bool operator==(const PowerLawTrap&, const PowerLawTrap&) = default;
};

using TrapPotential = std::variant<HarmonicTrap, PowerLawTrap>;

void validate(const TrapPotential& trap);
bool is_harmonic(const TrapPotential& trap);

/// Populations of |m_S=-S> (n1) and |m_S=-S+1> (n2), and kinetic temperature.
struct GasState {
  double n1 = 0.0;
  double n2 = 0.0;
  double temperature = 0.0;  // K

  double total() const { return n1 + n2; }
  void validate() const;
  friend bool operator==(const GasState&, const GasState&) = default;
};

struct ControlState {
  double field = 0.0;       // T
  double gamma_sc = 0.0;    // 1/s
  void validate() const;
};

struct LossParams {
  double tau_bg = 200.0;  // s, +inf disables background loss
  double l3b = 0.0;       // m^6/s
  void validate() const;
  friend bool operator==(const LossParams&, const LossParams&) = default;
};

struct PumpParams {
  double impurity = 1e-3;       // p
  double target_ratio = 0.02;   // N2/N1 held by the servo
  double gamma_min = 30.0;      // 1/s
  double gamma_max = 2000.0;    // 1/s
  void validate() const;
  friend bool operator==(const PumpParams&, const PumpParams&) = default;
};

double alpha(const TrapPotential& trap);

/// 2 mu_B B
double zeeman_splitting(double field);
/// Delta E_Z / (k_B T)
double eta_b(double field, double temperature);
/// Inverse of eta_b at fixed temperature.
double field_for_eta(double eta, double temperature);

/// Effective two-body volume, n0 = N / Vbar. For a power-law trap this is
/// (int exp(-U/kT))^2 / int exp(-2U/kT), which reduces to
/// (sqrt(4 pi k T) / (w sqrt(m)))^3 in the harmonic case.
double mean_volume(const TrapPotential& trap, double temperature, double mass);

double peak_density(double atoms, double vbar);
double phase_space_density(double n0, double temperature, const SpeciesModel& species);

double recoil_energy(const SpeciesModel& species);
double recoil_temperature(const SpeciesModel& species);
/// Mean energy deposited per atom returned to the dark state, E_rec / (1 - kappa).
double pump_energy(const SpeciesModel& species);

/// (3/2 + alpha) N k_B T
double total_energy(const GasState& state, const TrapPotential& trap);

}  // namespace demag
