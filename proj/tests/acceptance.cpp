// Acceptance checks. Usage: demag_acceptance [criterion...]; no argument runs all.
// One PASS/FAIL line per check; exit status is the number of failures.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "equilibrium.hpp"
#include "random_config.hpp"
#include "simulation.hpp"
#include "table_io.hpp"

using namespace demag;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig config(const std::string& name) { return load_config(std::string(DEMAG_CONFIG_DIR) + "/" + name); }

struct Run {
  RunConfig cfg;
  Trajectory traj;
  double runtime = 0.0;
};

const Run& run(const std::string& name) {
  static std::map<std::string, Run> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  Run r;
  r.cfg = config(name);
  const auto t0 = Clock::now();
  r.traj = simulate(r.cfg.initial_state(), r.cfg.model_params(), r.cfg.controller, r.cfg.integrator);
  r.runtime = seconds_since(t0);
  return cache.emplace(name, std::move(r)).first->second;
}

// Linear interpolation of a record field at time t.
double at(const std::vector<TrajectoryRecord>& recs, double t, double TrajectoryRecord::*field) {
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].t >= t) {
      const auto& a = recs[i - 1];
      const auto& b = recs[i];
      const double w = (t - a.t) / (b.t - a.t);
      return a.*field + w * (b.*field - a.*field);
    }
  }
  return recs.back().*field;
}

double atoms_at(const std::vector<TrajectoryRecord>& recs, double t) {
  return at(recs, t, &TrajectoryRecord::n1) + at(recs, t, &TrajectoryRecord::n2);
}

std::size_t peak_index(const std::vector<TrajectoryRecord>& recs) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < recs.size(); ++i)
    if (recs[i].rho > recs[k].rho) k = i;
  return k;
}

// Captures stdout of a shell command.
std::string capture(const std::string& cmd) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe.get())) out += buf;
  return out;
}

void criterion1() {
  const std::string cli = DEMAG_CLI;
  const auto t0 = Clock::now();
  const auto s3 = capture(cli + " optimal-eta --spin 3");
  const auto big = capture(cli + " optimal-eta --spin 1e6");
  const double elapsed = seconds_since(t0);
  const double e3 = s3.empty() ? NAN : std::strtod(s3.c_str(), nullptr);
  const double eb = big.empty() ? NAN : std::strtod(big.c_str(), nullptr);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  report("1 (S=3)", std::abs(e3 - 1.31) <= 0.02, fmt("eta_opt = %.6f, accept 1.31 +- 0.02", e3));
  report("1 (S=1e6)", std::abs(eb - phi) <= 1e-3, fmt("eta_opt = %.6f, golden ratio %.6f +- 1e-3", eb, phi));
  report("1 (runtime)", elapsed < 1.0, fmt("%.3f s for both CLI calls, limit 1 s", elapsed));
}

void criterion2() {
  const SpeciesModel sp;
  const auto model = CrossSectionModel::heaviside();
  const auto t0 = Clock::now();
  double worst = 0.0, worst_channel = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = 1e-6 * std::pow(1e3, i / 19.0);
    for (int j = 0; j < 20; ++j) {
      const double eta = 10.0 * j / 19.0;
      const double b = field_for_eta(eta, t);
      const auto cf = rate_constants(t, b, sp, model, RateMethod::closed_form);
      const auto q = rate_constants(t, b, sp, model, RateMethod::quadrature);
      worst = std::max(worst, std::abs(q.beta() / cf.beta() - 1.0));
      for (auto m : {&RateConstants::ssf_fwd, &RateConstants::dsf_fwd, &RateConstants::ssf_bwd,
                     &RateConstants::dsf_bwd})
        worst_channel = std::max(worst_channel, std::abs(q.*m / (cf.*m) - 1.0));
    }
  }
  const double elapsed = seconds_since(t0);
  report("2", worst <= 1e-6 && elapsed < 10.0,
         fmt("max |beta_quad/beta_closed - 1| = %.2e (every channel %.2e), limit 1e-6; %.3f s", worst,
             worst_channel, elapsed));
}

void criterion3() {
  const double t0 = 200e-6;
  std::vector<double> fields;
  for (int i = 0; i <= 200; ++i) fields.push_back(10e-4 * i / 200.0);
  double worst = 0.0;
  for (double spin : {0.5, 1.0, 3.0})
    for (const auto& row : equilibrium_curve(t0, spin, 1.5, fields))
      worst = std::max(worst, energy_balance_residual({t0, row.field, spin, 1.5}, row.ratio * t0));
  report("3 (residual)", worst <= 1e-10, fmt("max residual %.2e over 603 grid points, limit 1e-10", worst));

  const double r100 = equilibrium_temperature({t0, field_for_eta(1e-3, t0), 100.0, 1.5}) / t0;
  report("3 (S=100, eta=1e-3)", std::abs(r100 - 0.75) <= 0.01,
         fmt("T_eq/T0 = %.6f, accept 0.75 +- 0.01 (the 0.75 limit needs 2 S eta >> 1; eta=0.05 gives %.4f)",
             r100, equilibrium_temperature({t0, field_for_eta(0.05, t0), 100.0, 1.5}) / t0));

  const double rinf = equilibrium_temperature({t0, field_for_eta(200.0, t0), 3.0, 1.5}) / t0;
  report("3 (large B)", std::abs(rinf - 1.0) <= 1e-9, fmt("T_eq/T0 = 1 %+.2e at eta = 200, limit 1e-9", rinf - 1.0));
}

void criterion4() {
  ModelParams p;
  p.loss = {INFINITY, 0.0};
  p.pump.impurity = 0.0;
  const GasState s{5e6, 0.0, 200e-6};
  double worst = 0.0;
  for (double eta : {50.0, 80.0}) {
    GasState y = s;
    const ControlState ctl{field_for_eta(eta, s.temperature), 0.0};
    for (int k = 0; k < 100; ++k) {
      y = integrate_fixed(y, ctl, p, 0.1, IntegratorConfig{});
      worst = std::max(worst, std::abs(y.temperature / s.temperature - 1.0));
    }
  }
  report("4", worst <= 1e-6, fmt("max |dT|/T = %.2e over 10 s at eta_B = 50 and 80, limit 1e-6", worst));
}

void criterion5() {
  ModelParams p;
  p.loss = {INFINITY, 0.0};
  p.pump.impurity = 0.0;
  std::vector<std::pair<std::string, ModelParams>> variants;
  for (auto m : {RateMethod::closed_form, RateMethod::quadrature}) {
    p.rate_method = m;
    p.xsec = CrossSectionModel::heaviside();
    variants.emplace_back(m == RateMethod::closed_form ? "threshold/closed" : "threshold/quadrature", p);
  }
  p.rate_method = RateMethod::quadrature;
  p.xsec = CrossSectionModel::symmetry_function(
      std::make_shared<SymmetryTable>(SymmetryTable::load(std::string(DEMAG_TEST_DATA) + "/h_quadratic.txt")));
  variants.emplace_back("tabulated h", p);
  double worst = 0.0;
  for (const auto& [name, params] : variants)
    for (double eta : {0.5, 1.31, 3.0})
      for (double t : {1e-6, 200e-6}) {
        const GasState s{5e6, 5e6 * std::exp(-eta), t};
        const auto x = dipolar_exchange(s, field_for_eta(eta, t), params);
        // Losses and pumping are off, so dN1/dt is the net exchange alone.
        const auto d = derivative(s, {field_for_eta(eta, t), 0.0}, params);
        worst = std::max({worst, std::abs(x.ndot_r) / x.one_way, std::abs(d.dn1) / x.one_way});
      }
  report("5", worst <= 1e-3, fmt("max |net|/one-way = %.2e over 3 cross-section setups, limit 1e-3", worst));
}

void criterion6() {
  const auto& r = run("baseline.json");
  const auto& recs = r.traj.records;
  const auto params = r.cfg.model_params();

  // (a) simulated temperature change over the first second against the
  // analytic polarised-cloud rate evaluated along the same path.
  double analytic = 0.0;
  for (std::size_t i = 1; i < recs.size() && recs[i - 1].t < 1.0; ++i) {
    auto rate = [&](const TrajectoryRecord& x) {
      return cooling_rate_estimate(x.temperature, x.atoms(), params.trap, x.eta, params.species);
    };
    const double hi = std::min(recs[i].t, 1.0);
    const double w = (hi - recs[i - 1].t) / (recs[i].t - recs[i - 1].t);
    const double end_rate = rate(recs[i - 1]) + w * (rate(recs[i]) - rate(recs[i - 1]));
    analytic += 0.5 * (rate(recs[i - 1]) + end_rate) * (hi - recs[i - 1].t);
  }
  const double simulated = at(recs, 1.0, &TrajectoryRecord::temperature) - recs.front().temperature;
  const double dev = simulated / analytic - 1.0;
  report("6a", std::abs(dev) <= 0.05,
         fmt("dT(0..1 s) simulated %.4e K, analytic %.4e K, deviation %+.2f%%, limit 5%%", simulated, analytic,
             100.0 * dev));

  // (b)
  bool mono = true;
  double prev_t = recs.front().temperature, prev_b = recs.front().field;
  for (int k = 1; k <= 70; ++k) {
    const double t = 0.1 * k;
    const double tt = at(recs, t, &TrajectoryRecord::temperature);
    const double bb = at(recs, t, &TrajectoryRecord::field);
    mono = mono && tt < prev_t && bb < prev_b;
    prev_t = tt;
    prev_b = bb;
  }
  report("6b", mono, fmt("T and B sampled every 0.1 s to 7 s are %s; T(7 s) = %.3f uK, B(7 s) = %.3f mG",
                         mono ? "strictly decreasing" : "NOT monotone", prev_t * 1e6, prev_b * 1e7));

  // (c)
  const std::size_t ipk = peak_index(recs);
  const double n0 = recs.front().atoms();
  double gain = 0.0, loss_at = 0.0;
  for (std::size_t i = 0; i <= ipk; ++i) {
    if (recs[i].atoms() < 0.9 * n0) break;
    const double g = std::log10(recs[i].rho / recs.front().rho);
    if (g > gain) {
      gain = g;
      loss_at = 1.0 - recs[i].atoms() / n0;
    }
  }
  report("6c", gain >= 4.5,
         fmt("PSD gain %.2f decades with %.1f%% atom loss (limit 10%%); peak rho %.3g at %.2f s after %.1f%% loss",
             gain, 100.0 * loss_at, recs[ipk].rho, recs[ipk].t, 100.0 * (1.0 - recs[ipk].atoms() / n0)));

  const auto& last = recs.back();
  report("6d", last.field >= 3e-7 && last.field <= 3e-6, fmt("final B = %.2f mG, accept [3, 30]", last.field * 1e7));

  const double trec = recoil_temperature(params.species);
  const double f = last.temperature / trec;
  report("6e", f >= 1.0 / 3.0 && f <= 3.0,
         fmt("final T = %.3f uK = %.2f T_rec (T_rec = %.3f uK), accept factor 3", last.temperature * 1e6, f,
             trec * 1e6));

  const auto chi = compute_chi(recs);
  const double mc = chi.max_chi.value_or(NAN);
  report("6f", mc >= 90.0 && mc <= 1000.0, fmt("max chi = %.1f, accept [90, 1000]", mc));
  report("6 (runtime)", r.runtime <= 120.0,
         fmt("%.3f s, %zu records, ended by %s at %.2f s", r.runtime, recs.size(),
             std::string(to_string(r.traj.termination)).c_str(), last.t));
}

void criterion7() {
  const auto& base = run("baseline.json").traj.records;
  const auto& pv = run("variant_p1e-2.json").traj.records;
  const auto& rv = run("variant_r0.005.json").traj.records;

  const double decades = std::log10(base.back().rho / pv.back().rho);
  report("7 (p=1e-2)", decades >= 1.0 && decades <= 2.0,
         fmt("final PSD lowered by %.2f decades (%.3g -> %.3g), accept 1.0-2.0; peak PSD lowered by %.2f", decades,
             base.back().rho, pv.back().rho, std::log10(base[peak_index(base)].rho / pv[peak_index(pv)].rho)));

  const double tb = 1.0;
  const double rise_base = at(base, tb, &TrajectoryRecord::n0) / base.front().n0;
  const double rise_r = at(rv, tb, &TrajectoryRecord::n0) / rv.front().n0;
  report("7 (r=0.005 density)", rise_r > rise_base,
         fmt("n0(1 s)/n0(0) = %.4f versus baseline %.4f", rise_r, rise_base));

  const double tf = rv.back().temperature;
  report("7 (r=0.005 final T)", tf >= 1e-6 && tf <= 3e-6 && tf > base.back().temperature,
         fmt("final T = %.3f uK (baseline %.3f uK), accept 1-3 uK and above baseline", tf * 1e6,
             base.back().temperature * 1e6));
}

void criterion8() {
  ModelParams p;
  p.loss = {200.0, 1e-41};
  // Servo-like operating point: N2/N1 at the 2% target, scattering near its floor.
  const GasState s{4.9e6, 9.8e4, 200e-6};
  const ControlState ctl{field_for_eta(1.31, s.temperature), 40.0};
  std::vector<double> orders;
  double dt = 8e-3;
  double prev = dormand_prince_step(s, ctl, p, dt, IntegratorConfig{}).error_norm;
  for (int k = 0; k < 3; ++k) {
    dt *= 0.5;
    const double e = dormand_prince_step(s, ctl, p, dt, IntegratorConfig{}).error_norm;
    orders.push_back(std::log2(prev / e));
    prev = e;
  }
  const double kmin = *std::min_element(orders.begin(), orders.end());
  report("8 (order)", kmin >= 4.0,
         fmt("local error order %.2f, %.2f, %.2f over dt = 8, 4, 2, 1 ms; need >= 4", orders[0], orders[1], orders[2]));

  ModelParams bg;
  bg.loss = {200.0, 0.0};
  bg.pump.impurity = 0.0;
  const GasState s0{1e6, 0.0, 1e-5};
  const auto end = integrate_fixed(s0, {field_for_eta(500.0, s0.temperature), 0.0}, bg, 200.0, IntegratorConfig{});
  const double dev = end.total() / s0.total() / std::exp(-1.0) - 1.0;
  report("8 (decay)", std::abs(dev) <= 1e-8, fmt("N(tau)/N0 = e^-1 %+.2e relative, limit 1e-8", dev));
}

void criterion9() {
  std::mt19937_64 rng(97);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = testing::random_config(rng);
    try {
      if (parse_config(render_config(c)) == c) ++ok;
    } catch (const ConfigError&) {
    }
  }
  report("9 (config)", ok == 100, fmt("%d of 100 random configs survive render -> parse unchanged", ok));

  const auto& recs = run("baseline.json").traj.records;
  const auto dir = fs::temp_directory_path() / "demag_acceptance";
  fs::create_directories(dir);
  const auto path = (dir / "baseline.csv").string();
  write_trajectory_csv(recs, path);
  const auto back = read_trajectory_csv(path);
  const bool exact =
      back.size() == recs.size() && std::memcmp(back.data(), recs.data(), recs.size() * sizeof(TrajectoryRecord)) == 0;
  report("9 (csv)", exact, fmt("%zu baseline records read back %s", recs.size(), exact ? "bit-exactly" : "with differences"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::array<std::function<void()>, 9> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
  if (pick.empty())
    for (int i = 1; i <= 9; ++i) pick.push_back(i);
  for (int n : pick) {
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    try {
      all[n - 1]();
    } catch (const std::exception& e) {
      report(std::to_string(n), false, std::string("exception: ") + e.what());
    }
  }
  return failures;
}
