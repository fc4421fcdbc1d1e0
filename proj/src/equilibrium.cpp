#include "equilibrium.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "constants.hpp"
#include "core_model.hpp"

namespace demag {

namespace c = constants;

void EquilibriumProblem::validate() const {
  if (!(t0 > 0.0)) throw std::invalid_argument("equilibrium: T0 must be > 0");
  if (!(field >= 0.0)) throw std::invalid_argument("equilibrium: B must be >= 0");
  if (!(spin >= 0.5)) throw std::invalid_argument("equilibrium: spin must be >= 1/2");
  if (!(alpha >= 0.0)) throw std::invalid_argument("equilibrium: alpha must be >= 0");
}

double ladder_mean_level(double temperature, double field, double spin) {
  if (!(temperature > 0.0)) throw std::invalid_argument("ladder_mean_level: temperature must be > 0");
  const double x = eta_b(field, temperature);
  const long levels = std::lround(2.0 * spin) + 1;
  double num = 0.0, den = 0.0;
  for (long i = 0; i < levels; ++i) {
    const double w = std::exp(-x * static_cast<double>(i));
    if (w == 0.0) break;
    num += static_cast<double>(i) * w;
    den += w;
  }
  return num / den;
}

namespace {

// (3/2+alpha) k (T - T0) + dE_Z <i>(T); increasing in T.
double balance(const EquilibriumProblem& p, double t) {
  return (1.5 + p.alpha) * c::k_B * (t - p.t0) +
         zeeman_splitting(p.field) * ladder_mean_level(t, p.field, p.spin);
}

}  // namespace

double energy_balance_residual(const EquilibriumProblem& problem, double t_eq) {
  return std::abs(balance(problem, t_eq)) / ((1.5 + problem.alpha) * c::k_B * problem.t0);
}

double equilibrium_temperature(const EquilibriumProblem& problem) {
  problem.validate();
  const double hi = problem.t0;
  const double lo = 1e-6 * problem.t0;
  if (balance(problem, hi) <= 0.0) return hi;
  if (balance(problem, lo) > 0.0)
    throw std::runtime_error("equilibrium: root not bracketed in [1e-6 T0, T0]");
  auto f = [&](double t) { return balance(problem, t); };
  auto done = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::abs(b); };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, done);
  return 0.5 * (a + b);
}

std::vector<EquilibriumRow> equilibrium_curve(double t0, double spin, double alpha,
                                              std::span<const double> fields) {
  std::vector<EquilibriumRow> rows;
  rows.reserve(fields.size());
  for (double b : fields) {
    const EquilibriumProblem p{t0, b, spin, alpha};
    rows.push_back({b, eta_b(b, t0), equilibrium_temperature(p) / t0});
  }
  return rows;
}

}  // namespace demag
