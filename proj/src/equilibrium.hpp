#pragma once

#include <span>
#include <vector>

namespace demag {

struct EquilibriumProblem {
  double t0 = 0.0;      // K
  double field = 0.0;   // T
  double spin = 3.0;
  double alpha = 1.5;

  void validate() const;
};

/// Boltzmann-weighted mean ladder index <i> over i = 0..2S.
double ladder_mean_level(double temperature, double field, double spin);

/// Relative residual of the kinetic/spin energy balance at t_eq.
double energy_balance_residual(const EquilibriumProblem& problem, double t_eq);

/// Temperature reached once an initially polarised cloud has relaxed into
/// Boltzmann occupation of the full spin ladder.
double equilibrium_temperature(const EquilibriumProblem& problem);

struct EquilibriumRow {
  double field;      // T
  double splitting;  // Delta E_Z / (k_B T0)
  double ratio;      // T_eq / T0
};

std::vector<EquilibriumRow> equilibrium_curve(double t0, double spin, double alpha,
                                              std::span<const double> fields);

}  // namespace demag
