// Command-line front end. Talks to the library through the C API only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "demag/demag.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

constexpr double kMicrokelvin = 1e-6;
constexpr double kGauss = 1e-4;

struct ConfigDeleter {
  void operator()(demag_config* c) const { demag_config_free(c); }
};
struct TrajectoryDeleter {
  void operator()(demag_trajectory* t) const { demag_trajectory_free(t); }
};
using ConfigPtr = std::unique_ptr<demag_config, ConfigDeleter>;
using TrajectoryPtr = std::unique_ptr<demag_trajectory, TrajectoryDeleter>;

int report(demag_status status) {
  std::fprintf(stderr, "error: %s\n", demag_last_error());
  return status == DEMAG_ERR_NUMERICAL ? kExitNumerical : kExitConfig;
}

// "a:step:b", inclusive of b up to rounding.
std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw CLI::ValidationError("--eta", "expected start:step:stop");
  const double a = std::stod(text.substr(0, first));
  const double step = std::stod(text.substr(first + 1, second - first - 1));
  const double b = std::stod(text.substr(second + 1));
  if (!(step > 0.0) || !(b >= a) || !(a >= 0.0))
    throw CLI::ValidationError("--eta", "need 0 <= start <= stop and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + static_cast<double>(i) * step;
  return out;
}

int write_table(const std::string& path, const std::vector<const char*>& columns,
                const std::vector<double>& data) {
  const std::size_t rows = columns.empty() ? 0 : data.size() / columns.size();
  const demag_status s = demag_write_table_csv(path.c_str(), columns.data(), columns.size(), data.data(), rows);
  if (s != DEMAG_OK) return report(s);
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& output) {
  demag_config* raw = nullptr;
  demag_status s = demag_config_load(config_path.c_str(), &raw);
  ConfigPtr config(raw);
  if (s != DEMAG_OK) return report(s);
  if (!output.empty() && (s = demag_config_set_output_path(config.get(), output.c_str())) != DEMAG_OK)
    return report(s);
  const std::string csv = demag_config_output_path(config.get());

  demag_trajectory* traj_raw = nullptr;
  const demag_status sim = demag_simulate(config.get(), &traj_raw);
  TrajectoryPtr traj(traj_raw);
  if (!traj) return report(sim);
  const std::string sim_error = sim == DEMAG_OK ? "" : demag_last_error();

  // Partial output is still flushed on a numerical failure.
  const std::size_t max_rows = demag_config_max_rows(config.get());
  const std::size_t n = demag_trajectory_size(traj.get());
  const std::size_t written = n > max_rows ? max_rows : n;
  if ((s = demag_trajectory_write_csv(traj.get(), csv.c_str(), max_rows)) != DEMAG_OK) return report(s);
  std::string meta = csv;
  if (meta.size() > 4 && meta.compare(meta.size() - 4, 4, ".csv") == 0) meta.resize(meta.size() - 4);
  meta += ".json";
  if ((s = demag_trajectory_write_metadata(traj.get(), config.get(), meta.c_str(), written)) != DEMAG_OK)
    return report(s);

  demag_record last{}, peak{};
  demag_trajectory_record(traj.get(), n - 1, &last);
  for (std::size_t i = 0; i < n; ++i) {
    demag_record r{};
    demag_trajectory_record(traj.get(), i, &r);
    if (r.rho > peak.rho) peak = r;
  }
  double chi = 0.0;
  int chi_defined = 0;
  demag_trajectory_max_chi(traj.get(), &chi, &chi_defined);

  std::printf("termination: %s\n", demag_termination_name(demag_trajectory_termination(traj.get())));
  std::printf("records: %zu (written %zu)\n", n, written);
  std::printf("final: t = %.4g s, T = %.4g uK, B = %.4g mG, N = %.4g\n", last.t,
              last.temperature / kMicrokelvin, last.field / kGauss * 1e3, last.n1 + last.n2);
  std::printf("peak rho: %.4g at t = %.4g s\n", peak.rho, peak.t);
  if (chi_defined) std::printf("max chi: %.4g\n", chi);
  std::printf("csv: %s\nmetadata: %s\n", csv.c_str(), meta.c_str());
  if (sim != DEMAG_OK) {
    std::fprintf(stderr, "error: %s (partial trajectory written, marked truncated)\n", sim_error.c_str());
    return kExitNumerical;
  }
  return kExitOk;
}

int run_equilibrium(double t0_uk, double bmin_g, double bmax_g, std::size_t points, std::vector<double> spins,
                    double alpha, const std::string& output) {
  if (points < 2 || !(bmax_g > bmin_g) || !(bmin_g >= 0.0)) {
    std::fprintf(stderr, "error: need 0 <= --field-min < --field-max and --points >= 2\n");
    return kExitConfig;
  }
  const double t0 = t0_uk * kMicrokelvin;
  std::vector<double> fields(points);
  for (std::size_t i = 0; i < points; ++i)
    fields[i] = (bmin_g + (bmax_g - bmin_g) * static_cast<double>(i) / static_cast<double>(points - 1)) * kGauss;
  std::vector<double> data;
  std::vector<double> splitting(points), ratio(points);
  for (double spin : spins) {
    const demag_status s =
        demag_equilibrium_curve(t0, spin, alpha, fields.data(), points, splitting.data(), ratio.data());
    if (s != DEMAG_OK) return report(s);
    for (std::size_t i = 0; i < points; ++i) data.insert(data.end(), {spin, fields[i], splitting[i], ratio[i]});
  }
  if (int rc = write_table(output, {"spin", "B_T", "dEz_over_kT0", "Teq_over_T0"}, data)) return rc;
  std::printf("wrote %zu rows to %s\n", data.size() / 4, output.c_str());
  return kExitOk;
}

int run_rate_profile(double spin, const std::string& eta_range, const std::string& config_path,
                     const std::string& output) {
  ConfigPtr config;
  if (!config_path.empty()) {
    demag_config* raw = nullptr;
    const demag_status s = demag_config_load(config_path.c_str(), &raw);
    config.reset(raw);
    if (s != DEMAG_OK) return report(s);
  }
  std::vector<double> etas = parse_range(eta_range);
  double eta_opt = 0.0;
  demag_status s = demag_optimal_eta(spin, &eta_opt);
  if (s != DEMAG_OK) return report(s);
  // The exact optimum is inserted as an extra, flagged row.
  std::size_t opt_index = etas.size();
  if (eta_opt >= etas.front() && eta_opt <= etas.back()) {
    auto it = std::lower_bound(etas.begin(), etas.end(), eta_opt);
    opt_index = static_cast<std::size_t>(it - etas.begin());
    etas.insert(it, eta_opt);
  }
  std::vector<double> rates(etas.size());
  if ((s = demag_rate_profile(config.get(), spin, etas.data(), etas.size(), rates.data())) != DEMAG_OK)
    return report(s);
  std::vector<double> data;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    double shape = 0.0;
    if ((s = demag_cooling_shape(etas[i], spin, &shape)) != DEMAG_OK) return report(s);
    data.insert(data.end(), {etas[i], shape, rates[i], i == opt_index ? 1.0 : 0.0});
  }
  if (int rc = write_table(output, {"eta", "shape", "dTdt_K_s-1", "is_opt"}, data)) return rc;
  std::printf("eta_opt = %.6f\n", eta_opt);
  std::printf("wrote %zu rows to %s\n", etas.size(), output.c_str());
  return kExitOk;
}

int run_optimal_eta(double spin) {
  double eta = 0.0;
  const demag_status s = demag_optimal_eta(spin, &eta);
  if (s != DEMAG_OK) return report(s);
  std::printf("%.6f\n", eta);
  return kExitOk;
}

int run_sweep(const std::string& spec_path) {
  std::size_t runs = 0, failed = 0;
  const demag_status s = demag_sweep_run(spec_path.c_str(), &runs, &failed);
  if (s != DEMAG_OK) return report(s);
  std::printf("%zu runs, %zu failed\n", runs, failed);
  return failed ? kExitNumerical : kExitOk;
}

int run_schema(const std::string& output) {
  char* text = nullptr;
  const demag_status s = demag_config_schema(&text);
  if (s != DEMAG_OK) return report(s);
  const std::string schema = text;
  demag_string_free(text);
  if (output.empty()) {
    std::fputs(schema.c_str(), stdout);
    return kExitOk;
  }
  std::FILE* f = std::fopen(output.c_str(), "wb");
  if (!f || std::fputs(schema.c_str(), f) < 0) {
    if (f) std::fclose(f);
    std::fprintf(stderr, "error: cannot write '%s'\n", output.c_str());
    return kExitConfig;
  }
  std::fclose(f);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demagnetisation cooling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(demag_version()) + " (" + demag_build_id() + ")");

  std::string config_path, output;
  auto* sim = app.add_subcommand("simulate", "Run one closed-loop cooling trajectory; writes CSV and a JSON sidecar");
  sim->add_option("-c,--config", config_path, "Run configuration (JSON; see the `schema` subcommand)")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("-o,--output", output, "Override the configured CSV path");

  double t0_uk = 200.0, bmin = 0.0, bmax = 10.0, alpha = 1.5;
  std::size_t points = 201;
  std::vector<double> spins{0.5, 1.0, 3.0};
  std::string eq_output = "equilibrium_curve.csv";
  auto* eq = app.add_subcommand("equilibrium-curve", "Equilibrium temperature after full depolarisation vs field");
  eq->add_option("--t0", t0_uk, "Initial temperature in uK")->capture_default_str()->check(CLI::PositiveNumber);
  eq->add_option("--field-min", bmin, "Lowest field in G")->capture_default_str();
  eq->add_option("--field-max", bmax, "Highest field in G")->capture_default_str();
  eq->add_option("--points", points, "Number of field values")->capture_default_str();
  eq->add_option("--spin", spins, "Spin quantum number(s); repeat for several curves")->capture_default_str();
  eq->add_option("--alpha", alpha, "Trap parameter (3/2 for harmonic)")->capture_default_str();
  eq->add_option("-o,--output", eq_output, "CSV path")->capture_default_str();

  double rp_spin = 3.0;
  std::string eta_range = "0:0.01:5", rp_config, rp_output = "rate_profile.csv";
  auto* rp = app.add_subcommand("rate-profile", "Analytic cooling rate of a polarised cloud over an eta grid");
  rp->add_option("--spin", rp_spin, "Spin quantum number")->capture_default_str();
  rp->add_option("--eta", eta_range, "Grid start:step:stop")->capture_default_str();
  rp->add_option("-c,--config", rp_config, "Take trap, N and T from this config (default: 5e6 atoms, 200 uK, 500 Hz)")
      ->check(CLI::ExistingFile);
  rp->add_option("-o,--output", rp_output, "CSV path")->capture_default_str();

  double oe_spin = 3.0;
  auto* oe = app.add_subcommand("optimal-eta", "Print the cutoff that maximises the analytic cooling rate");
  oe->add_option("--spin", oe_spin, "Spin quantum number")->capture_default_str();

  std::string sweep_path;
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep; one CSV per run plus index.csv");
  sw->add_option("spec", sweep_path, "Sweep specification (JSON)")->required()->check(CLI::ExistingFile);

  std::string schema_output;
  auto* sc = app.add_subcommand("schema", "Print the configuration JSON schema with defaults and units");
  sc->add_option("-o,--output", schema_output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) return run_simulate(config_path, output);
    if (*eq) return run_equilibrium(t0_uk, bmin, bmax, points, spins, alpha, eq_output);
    if (*rp) return run_rate_profile(rp_spin, eta_range, rp_config, rp_output);
    if (*oe) return run_optimal_eta(oe_spin);
    if (*sw) return run_sweep(sweep_path);
    if (*sc) return run_schema(schema_output);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
