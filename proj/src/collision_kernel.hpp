#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace demag {

/// Piecewise-linear h(x) on [0, 1] read from a two-column text file.
class SymmetryTable {
 public:
  explicit SymmetryTable(std::vector<std::pair<double, double>> points);
  static SymmetryTable load(const std::string& path);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

/// Either the threshold approximation (1+h) k_f/k_i = 1/2 Theta(E - dM dE_Z)
/// or an explicit symmetry function h.
struct CrossSectionModel {
  enum class Kind { heaviside, symmetry_function };
  Kind kind = Kind::heaviside;
  std::shared_ptr<const SymmetryTable> table;

  static CrossSectionModel heaviside() { return {}; }
  static CrossSectionModel symmetry_function(std::shared_ptr<const SymmetryTable> h) {
    return {Kind::symmetry_function, std::move(h)};
  }
};

/// Forward channels are endothermic (|m=-S> partner promoted); backward
/// channels are their exothermic reverses.
enum class Channel { ssf_fwd, dsf_fwd, ssf_bwd, dsf_bwd };

int delta_m(Channel ch);
bool is_double_flip(Channel ch);

/// Thermally averaged <sigma v> for every channel (m^3/s).
struct RateConstants {
  double ssf_fwd = 0.0;
  double dsf_fwd = 0.0;
  double ssf_bwd = 0.0;
  double dsf_bwd = 0.0;

  /// <(sigma_1 + 2 sigma_2) v> for a polarised cloud.
  double beta() const { return ssf_fwd + 2.0 * dsf_fwd; }
};

enum class RateMethod { closed_form, quadrature };

/// (mu_0 (2 mu_B)^2 m)^2 / (30 pi hbar^4)
double xi(const SpeciesModel& species);

/// k_f/k_i for a collision with relative energy e_rel changing the total
/// spin projection by delta_m; zero when the channel is closed.
double final_state_ratio(double e_rel, int delta_m, double delta_ez);

double sigma_channel(double v_rel, double field, const SpeciesModel& species,
                     const CrossSectionModel& model, Channel channel);

/// <sigma v> over the Maxwell-Boltzmann relative-speed distribution
/// (reduced mass m/2), by adaptive Gauss-Kronrod quadrature.
double thermal_average(double temperature, double field, const SpeciesModel& species,
                       const CrossSectionModel& model, Channel channel);

/// 2 xi sqrt(kT/(pi m)) [S^3 (1+eta) e^-eta + 2 S^2 (1+2 eta) e^-2eta]
double beta_forward_closed_form(double temperature, double field, const SpeciesModel& species);

double beta_backward(double temperature, double field, const SpeciesModel& species,
                     Channel channel);

/// All four channel constants. closed_form is only available for the
/// heaviside model and falls back to quadrature otherwise.
RateConstants rate_constants(double temperature, double field, const SpeciesModel& species,
                             const CrossSectionModel& model,
                             RateMethod method = RateMethod::closed_form);

/// The dimensionless eta dependence of the estimate below,
/// {(1+eta) S + (2+4 eta) e^-eta} eta e^-eta.
double cooling_shape(double eta, double spin);

/// Analytic cooling rate of a polarised cloud (K/s, never positive).
double cooling_rate_estimate(double temperature, double atoms, const TrapPotential& trap,
                             double eta, const SpeciesModel& species);

/// Maximiser of cooling_shape on [0, 20].
double optimal_eta(double spin, double tol = 1e-6);

}  // namespace demag
