#include "collision_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "constants.hpp"
#include "golden_section.hpp"

namespace demag {

namespace c = constants;

SymmetryTable::SymmetryTable(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("symmetry table needs at least two points");
  std::sort(points_.begin(), points_.end());
  for (const auto& [x, h] : points_) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("symmetry table x outside [0, 1]");
    if (!std::isfinite(h)) throw std::invalid_argument("symmetry table h(x) must be finite");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first == points_[i - 1].first)
      throw std::invalid_argument("symmetry table has duplicate x");
  }
}

SymmetryTable SymmetryTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open symmetry table '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, h;
    if (!(ls >> x)) continue;
    if (!(ls >> h))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected two columns");
    pts.emplace_back(x, h);
  }
  return SymmetryTable(std::move(pts));
}

double SymmetryTable::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("symmetry function argument outside [0, 1]");
  if (x <= points_.front().first) return points_.front().second;
  if (x >= points_.back().first) return points_.back().second;
  const auto it = std::lower_bound(points_.begin(), points_.end(), std::make_pair(x, -HUGE_VAL));
  const auto& [x1, h1] = *it;
  const auto& [x0, h0] = *(it - 1);
  return h0 + (h1 - h0) * (x - x0) / (x1 - x0);
}

int delta_m(Channel ch) {
  switch (ch) {
    case Channel::ssf_fwd: return 1;
    case Channel::dsf_fwd: return 2;
    case Channel::ssf_bwd: return -1;
    case Channel::dsf_bwd: return -2;
  }
  return 0;
}

bool is_double_flip(Channel ch) { return ch == Channel::dsf_fwd || ch == Channel::dsf_bwd; }

namespace {

double spin_factor(const SpeciesModel& species, Channel ch) {
  const double s = species.spin;
  return is_double_flip(ch) ? s * s : s * s * s;
}

// Relative-speed scale sqrt(2 k T / mu) with mu = m/2.
double thermal_speed(double temperature, double mass) {
  return std::sqrt(4.0 * c::k_B * temperature / mass);
}

constexpr double kSpeedCutoff = 12.0;  // in units of the thermal speed
constexpr double kQuadratureTol = 1e-11;

}  // namespace

double xi(const SpeciesModel& species) {
  const double dipole = c::mu_0 * (2.0 * c::mu_B) * (2.0 * c::mu_B) * species.mass;
  const double hbar2 = c::hbar * c::hbar;
  return dipole * dipole / (30.0 * c::pi * hbar2 * hbar2);
}

double final_state_ratio(double e_rel, int dm, double delta_ez) {
  if (!(e_rel > 0.0)) throw std::invalid_argument("final_state_ratio: relative energy must be > 0");
  const double radicand = 1.0 - dm * delta_ez / e_rel;
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

double sigma_channel(double v_rel, double field, const SpeciesModel& species,
                     const CrossSectionModel& model, Channel channel) {
  if (!(v_rel > 0.0)) throw std::invalid_argument("sigma_channel: relative speed must be > 0");
  const double e_rel = species.mass * v_rel * v_rel / 4.0;
  const int dm = delta_m(channel);
  const double x = final_state_ratio(e_rel, dm, zeeman_splitting(field));
  const double prefactor = xi(species) * spin_factor(species, channel);
  if (model.kind == CrossSectionModel::Kind::heaviside) {
    // Backward channels follow from the forward step function by
    // microreversibility: sigma_b(E') E' = sigma_f(E' + |dM| dE_Z) (E' + |dM| dE_Z).
    if (dm > 0) return x > 0.0 ? 0.5 * prefactor : 0.0;
    return 0.5 * prefactor * x * x;
  }
  const auto& h = *model.table;
  if (dm > 0) return x > 0.0 ? prefactor * (1.0 + h(x)) * x : 0.0;
  // h is evaluated at k_small/k_large, which keeps detailed balance exact.
  return prefactor * (1.0 + h(1.0 / x)) * x;
}

double thermal_average(double temperature, double field, const SpeciesModel& species,
                       const CrossSectionModel& model, Channel channel) {
  if (!(temperature > 0.0)) throw std::invalid_argument("thermal_average: temperature must be > 0");
  const double vt = thermal_speed(temperature, species.mass);
  const int dm = delta_m(channel);
  const double eta = eta_b(field, temperature);

  double lo = 0.0;
  double hi = kSpeedCutoff;
  if (dm > 0) {
    const double s_th_sq = dm * eta;
    if (!std::isfinite(s_th_sq)) return 0.0;
    lo = std::sqrt(s_th_sq);
    hi = std::sqrt(s_th_sq + kSpeedCutoff * kSpeedCutoff);
  }
  // <sigma v> = vt (4/sqrt(pi)) int sigma(s vt) s^3 exp(-s^2) ds
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    return sigma_channel(s * vt, field, species, model, channel) * s * s * s * std::exp(-s * s);
  };
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const double integral = gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 20, kQuadratureTol, &err);
  return vt * 4.0 / std::sqrt(c::pi) * integral;
}

namespace {

double closed_form_prefactor(double temperature, const SpeciesModel& species) {
  return 2.0 * xi(species) * std::sqrt(c::k_B * temperature / (c::pi * species.mass));
}

}  // namespace

double beta_forward_closed_form(double temperature, double field, const SpeciesModel& species) {
  if (!(temperature > 0.0)) throw std::invalid_argument("beta_forward_closed_form: temperature must be > 0");
  const double eta = eta_b(field, temperature);
  const double s = species.spin;
  return closed_form_prefactor(temperature, species) *
         (s * s * s * (1.0 + eta) * std::exp(-eta) +
          2.0 * s * s * (1.0 + 2.0 * eta) * std::exp(-2.0 * eta));
}

double beta_backward(double temperature, double field, const SpeciesModel& species,
                     Channel channel) {
  if (delta_m(channel) > 0) throw std::invalid_argument("beta_backward: forward channel given");
  return thermal_average(temperature, field, species, CrossSectionModel::heaviside(), channel);
}

RateConstants rate_constants(double temperature, double field, const SpeciesModel& species,
                             const CrossSectionModel& model, RateMethod method) {
  if (!(temperature > 0.0)) throw std::invalid_argument("rate_constants: temperature must be > 0");
  if (method == RateMethod::closed_form && model.kind == CrossSectionModel::Kind::heaviside) {
    const double pre = closed_form_prefactor(temperature, species);
    const double eta = eta_b(field, temperature);
    const double s = species.spin;
    const double ssf = pre * s * s * s * (1.0 + eta);
    const double dsf = pre * s * s * (1.0 + 2.0 * eta);
    return {ssf * std::exp(-eta), dsf * std::exp(-2.0 * eta), ssf, dsf};
  }
  return {thermal_average(temperature, field, species, model, Channel::ssf_fwd),
          thermal_average(temperature, field, species, model, Channel::dsf_fwd),
          thermal_average(temperature, field, species, model, Channel::ssf_bwd),
          thermal_average(temperature, field, species, model, Channel::dsf_bwd)};
}

double cooling_shape(double eta, double spin) {
  const double e = std::exp(-eta);
  return ((1.0 + eta) * spin + (2.0 + 4.0 * eta) * e) * eta * e;
}

double cooling_rate_estimate(double temperature, double atoms, const TrapPotential& trap,
                             double eta, const SpeciesModel& species) {
  if (!(temperature > 0.0)) throw std::invalid_argument("cooling_rate_estimate: temperature must be > 0");
  if (!(atoms > 0.0)) throw std::invalid_argument("cooling_rate_estimate: atom number must be > 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("cooling_rate_estimate: eta must be >= 0");
  const double s = species.spin;
  const double vbar = mean_volume(trap, temperature, species.mass);
  return -2.0 / (1.5 + alpha(trap)) * std::sqrt(c::k_B / (c::pi * species.mass)) * xi(species) * s * s *
         cooling_shape(eta, s) * atoms / vbar * std::pow(temperature, 1.5);
}

double optimal_eta(double spin, double tol) {
  if (!(spin >= 0.5)) throw std::invalid_argument("optimal_eta: spin must be >= 1/2");
  return golden_section_maximize([spin](double eta) { return cooling_shape(eta, spin); }, 0.0, 20.0, tol).x;
}

}  // namespace demag
