#include <stdexcept>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "random_config.hpp"
#include "sweep.hpp"
#include "table_io.hpp"
#include "units.hpp"

using namespace demag;
namespace fs = std::filesystem;
using units::Dimension;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "demag_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kBaseline = std::string(DEMAG_CONFIG_DIR) + "/baseline.json";

bool mentions(const ConfigError& e, const std::string& path, const std::string& needle) {
  for (const auto& i : e.issues())
    if (i.path == path && i.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("unit parsing") {
    CHECK(units::parse("200 uK", Dimension::temperature) == doctest::Approx(200e-6).epsilon(1e-15));
    CHECK(units::parse("1.5 G", Dimension::field) == doctest::Approx(1.5e-4).epsilon(1e-15));
    CHECK(units::parse("500 Hz", Dimension::angular_rate) == doctest::Approx(2.0 * M_PI * 500.0));
    CHECK(units::parse("1e-41 m^6/s", Dimension::three_body_rate) == 1e-41);
    CHECK(units::parse("1e-29 cm^6/s", Dimension::three_body_rate) == doctest::Approx(1e-41).epsilon(1e-14));
    CHECK(units::parse("427.60 nm", Dimension::length) == doctest::Approx(427.60e-9).epsilon(1e-15));
    CHECK_THROWS_AS(units::parse("200", Dimension::temperature), std::invalid_argument);
    CHECK_THROWS_AS(units::parse("200 furlong", Dimension::temperature), std::invalid_argument);
    CHECK_THROWS_AS(units::parse("200 s", Dimension::temperature), std::invalid_argument);
    CHECK_THROWS_AS(units::parse("200uK", Dimension::temperature), std::invalid_argument);
  }

  TEST_CASE("rendering reads back exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> e(-40.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const double v = std::pow(10.0, e(rng));
      for (auto d : {Dimension::temperature, Dimension::field, Dimension::angular_rate, Dimension::mass})
        CHECK(units::parse(units::render(v, d), d) == v);
    }
  }

  TEST_CASE("shipped baseline resolves to the reference parameters") {
    const auto cfg = load_config(kBaseline);
    CHECK(cfg.label == "baseline");
    CHECK(cfg.species.spin == 3.0);
    CHECK(cfg.species.kappa == 0.25);
    CHECK(cfg.species.mass == doctest::Approx(51.9405 * 1.66053906660e-27).epsilon(1e-14));
    CHECK(std::get<HarmonicTrap>(cfg.trap).mean_angular_frequency == doctest::Approx(2.0 * M_PI * 500.0));
    CHECK(cfg.loss.tau_bg == 200.0);
    CHECK(cfg.loss.l3b == 1e-41);
    CHECK(cfg.pump.impurity == 1e-3);
    CHECK(cfg.pump.target_ratio == 0.02);
    CHECK(cfg.pump.gamma_min == 30.0);
    CHECK(cfg.pump.gamma_max == 2000.0);
    CHECK(cfg.initial.atoms == 5e6);
    CHECK(cfg.initial.temperature == doctest::Approx(200e-6).epsilon(1e-15));
    CHECK(cfg.initial_state() == GasState{5e6, 0.0, cfg.initial.temperature});
    CHECK(cfg.integrator.t_max == 40.0);
  }

  TEST_CASE("a bare number for a dimensioned key names the key and the line") {
    const std::string text =
        "{\n  \"trap\": {\"mean_frequency\": \"500 Hz\"},\n  \"initial\": {\n    \"atoms\": 5e6,\n"
        "    \"temperature\": 200\n  },\n  \"loss\": {\"background_lifetime\": \"200 s\", \"three_body_rate\": "
        "\"0 m^6/s\"},\n  \"pump\": {\"polarization_impurity\": 0.001, \"target_ratio\": 0.02}\n}\n";
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.issues().size() == 1);
      CHECK(e.issues()[0].path == "initial.temperature");
      CHECK(e.issues()[0].line == 5);
      CHECK(mentions(e, "initial.temperature", "missing unit"));
    }
  }

  TEST_CASE("unknown keys are rejected") {
    auto text = slurp(kBaseline);
    text.insert(text.find("\"kappa\""), "\"kapa\": 0.3,\n    ");
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(mentions(e, "species.kapa", "unknown key"));
      CHECK(e.issues()[0].line == 7);
    }
  }

  TEST_CASE("an empty document lists every required key") {
    for (const char* text : {"", "{}"}) {
      try {
        parse_config(text);
        FAIL("expected ConfigError");
      } catch (const ConfigError& e) {
        std::set<std::string> paths;
        for (const auto& i : e.issues()) paths.insert(i.path);
        CHECK(paths == std::set<std::string>{"trap.mean_frequency", "loss.background_lifetime",
                                             "loss.three_body_rate", "pump.polarization_impurity",
                                             "pump.target_ratio", "initial.atoms", "initial.temperature"});
      }
    }
  }

  TEST_CASE("malformed JSON and bad values") {
    CHECK_THROWS_AS(parse_config("{\n\"label\": \n"), ConfigError);
    auto text = slurp(kBaseline);
    const auto pos = text.find("0.25");
    text.replace(pos, 4, "1.5");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("render then parse is the identity on random configs") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
      const auto cfg = testing::random_config(rng);
      const auto text = render_config(cfg);
      RunConfig back;
      REQUIRE_NOTHROW(back = parse_config(text));
      CHECK(back == cfg);
      CHECK(render_config(back) == text);
    }
  }

  TEST_CASE("schema is valid JSON naming every section") {
    const auto s = config_schema();
    for (const char* key : {"species", "trap", "loss", "pump", "cross_section", "controller", "integrator",
                            "initial", "output"})
      CHECK(s.find(std::string("\"") + key + "\"") != std::string::npos);
  }

  TEST_CASE("trajectory CSV reads back bit-exactly") {
    const auto dir = scratch("csv");
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::vector<TrajectoryRecord> recs(200);
    for (auto& r : recs)
      for (double* f : {&r.t, &r.temperature, &r.field, &r.eta, &r.n1, &r.n2, &r.vbar, &r.n0, &r.rho,
                        &r.gamma_sc, &r.beta_fwd, &r.chi_inst})
        *f = std::pow(10.0, u(rng)) * (rng() % 2 ? 1.0 : -1.0);
    const auto path = (dir / "t.csv").string();
    write_trajectory_csv(recs, path);
    const auto back = read_trajectory_csv(path);
    REQUIRE(back.size() == recs.size());
    CHECK(std::memcmp(back.data(), recs.data(), recs.size() * sizeof(TrajectoryRecord)) == 0);
    const auto text = slurp(path);
    CHECK(text.substr(0, kTrajectoryHeader.size()) == kTrajectoryHeader);
    CHECK(text.find('\r') == std::string::npos);
  }

  TEST_CASE("an empty trajectory writes the header only") {
    const auto dir = scratch("empty");
    const auto path = (dir / "e.csv").string();
    write_trajectory_csv({}, path);
    CHECK(slurp(path) == std::string(kTrajectoryHeader) + "\n");
    CHECK(read_trajectory_csv(path).empty());
  }

  TEST_CASE("malformed CSV is reported") {
    const auto dir = scratch("bad");
    const auto path = (dir / "b.csv").string();
    write_text_file(path, "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_table_csv(path), IoError);
    CHECK_THROWS_AS(read_table_csv((dir / "missing.csv").string()), IoError);
    CHECK_THROWS_AS(write_text_file((dir / "no/such/dir/x.csv").string(), "x"), IoError);
  }

  TEST_CASE("sidecar naming and metadata contents") {
    CHECK(sidecar_path("out/run.csv") == "out/run.json");
    CHECK(sidecar_path("run.dat") == "run.dat.json");
    RunMetadata m;
    m.config = load_config(kBaseline);
    m.termination = Termination::rho_stall;
    m.records = 10;
    const auto j = metadata_json(m);
    for (const char* key : {"\"config\"", "\"constants\"", "\"build\"", "\"termination\"", "\"rho_stall\""})
      CHECK(j.find(key) != std::string::npos);
    CHECK_FALSE(build_id().empty());
  }

  TEST_CASE("sweep writes one index row per run") {
    const auto dir = scratch("sweep");
    auto base = load_config(kBaseline);
    base.integrator.t_max = 0.5;
    const std::string spec_text = "{\"base\": " + render_config(base) +
                                  ", \"axes\": [{\"key\": \"pump.polarization_impurity\", \"values\": [0.001, 0.01]},"
                                  " {\"key\": \"pump.target_ratio\", \"values\": [0.02, 0.005, 0.01]}],"
                                  " \"parallelism\": 3, \"output_dir\": \"" + dir.string() + "\"}";
    const auto spec = parse_sweep(spec_text);
    CHECK(spec.run_count() == 6);
    const auto runs = run_sweep(spec);
    REQUIRE(runs.size() == 6);
    std::istringstream index(slurp(dir / "index.csv"));
    std::string line;
    std::getline(index, line);
    CHECK(line.rfind("run,label,exit_code,status,termination,rows,csv,", 0) == 0);
    std::multiset<std::string> ids;
    while (std::getline(index, line)) ids.insert(line.substr(0, line.find(',')));
    CHECK(ids.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(ids.count(std::to_string(i)) == 1);
    for (const auto& r : runs) {
      CHECK(r.outcome.exit_code == 0);
      CHECK(fs::exists(r.csv_path));
      CHECK(fs::exists(sidecar_path(r.csv_path)));
    }
  }
}
