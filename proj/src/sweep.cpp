#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "table_io.hpp"

namespace demag {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

RunOutcome execute_run(const RunConfig& config, const std::string& csv_path) {
  RunOutcome out;
  Trajectory traj;
  RunMetadata meta;
  try {
    traj = simulate(config.initial_state(), config.model_params(), config.controller, config.integrator);
  } catch (const SimulationError& e) {
    traj = e.partial();
    out.exit_code = 2;
    out.message = e.what();
  } catch (const std::invalid_argument& e) {
    out.exit_code = 1;
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    // Table loading and similar I/O problems.
    out.exit_code = 1;
    out.message = e.what();
    return out;
  }
  const auto rows = decimate(traj.records, config.integrator.max_rows);
  meta = describe_run(config, traj, rows.size());
  meta.truncated = out.exit_code == 2;
  meta.error = out.message;
  out.termination = traj.termination;
  out.rows_written = rows.size();
  try {
    write_trajectory_csv(rows, csv_path);
    write_metadata(meta, sidecar_path(csv_path));
  } catch (const IoError& e) {
    out.exit_code = 1;
    out.message = e.what();
  }
  return out;
}

std::size_t SweepSpec::run_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json::json_pointer pointer_for(const std::string& dotted) {
  std::string p;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = dotted.find('.', start);
    p += "/" + dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return json::json_pointer(p);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SweepSpec parse_sweep(std::string_view text, const std::string& base_dir) {
  std::vector<ConfigIssue> issues;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({{"", 0, std::string("malformed sweep JSON: ") + e.what()}});
  }
  if (!doc.is_object()) throw ConfigError({{"", 1, "sweep spec must be an object"}});

  SweepSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (key != "base" && key != "axes" && key != "parallelism" && key != "output_dir")
      issues.push_back({key, 0, "unknown key"});
  }
  if (!doc.contains("base")) {
    issues.push_back({"base", 0, "required key missing"});
  } else if (doc["base"].is_string()) {
    fs::path p = doc["base"].get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    try {
      spec.base = read_file(p.string());
    } catch (const IoError& e) {
      issues.push_back({"base", 0, e.what()});
    }
  } else if (doc["base"].is_object()) {
    spec.base = doc["base"].dump(2);
  } else {
    issues.push_back({"base", 0, "expected a config path or an inline config object"});
  }

  if (!doc.contains("axes") || !doc["axes"].is_array() || doc["axes"].empty()) {
    issues.push_back({"axes", 0, "expected a non-empty array"});
  } else {
    for (std::size_t i = 0; i < doc["axes"].size(); ++i) {
      const auto& a = doc["axes"][i];
      const std::string where = "axes[" + std::to_string(i) + "]";
      if (!a.is_object() || !a.contains("key") || !a["key"].is_string() || !a.contains("values") ||
          !a["values"].is_array() || a["values"].empty() || a.size() != 2) {
        issues.push_back({where, 0, "expected {\"key\": \"section.name\", \"values\": [ ... ]}"});
        continue;
      }
      SweepAxis axis;
      axis.key = a["key"].get<std::string>();
      for (const auto& v : a["values"]) axis.values.push_back(v.dump());
      spec.axes.push_back(std::move(axis));
    }
  }

  if (doc.contains("parallelism")) {
    const auto& p = doc["parallelism"];
    if (!p.is_number_integer() || p.get<long long>() < 1)
      issues.push_back({"parallelism", 0, "expected a positive integer"});
    else
      spec.parallelism = static_cast<unsigned>(p.get<long long>());
  }
  fs::path out_dir = ".";
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string())
      issues.push_back({"output_dir", 0, "expected a string"});
    else
      out_dir = doc["output_dir"].get<std::string>();
  }
  if (out_dir.is_relative()) out_dir = fs::path(base_dir) / out_dir;
  spec.output_dir = out_dir.lexically_normal().string();

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

SweepSpec load_sweep(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError({{"", 0, e.what()}});
  }
  return parse_sweep(text, fs::path(path).parent_path().string().empty()
                               ? std::string(".")
                               : fs::path(path).parent_path().string());
}

std::vector<SweepRun> run_sweep(const SweepSpec& spec) {
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw IoError("cannot create '" + spec.output_dir + "': " + ec.message());

  const json base = json::parse(spec.base);
  const std::string base_label = base.contains("label") && base["label"].is_string()
                                     ? base["label"].get<std::string>()
                                     : std::string("run");

  // Row-major grid: the last axis varies fastest.
  const std::size_t n = spec.run_count();
  std::vector<SweepRun> runs(n);
  std::vector<std::string> docs(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& run = runs[i];
    run.index = i;
    json doc = base;
    std::size_t rem = i;
    run.settings.resize(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& axis = spec.axes[k];
      const std::size_t j = rem % axis.values.size();
      rem /= axis.values.size();
      run.settings[k] = axis.values[j];
      doc[pointer_for(axis.key)] = json::parse(axis.values[j]);
    }
    char name[32];
    std::snprintf(name, sizeof name, "run_%04zu", i);
    run.label = base_label + "_" + name;
    run.csv_path = (fs::path(spec.output_dir) / (std::string(name) + ".csv")).string();
    doc["label"] = run.label;
    if (!doc.contains("output") || !doc["output"].is_object()) doc["output"] = json::object();
    doc["output"]["path"] = run.csv_path;
    docs[i] = doc.dump(2);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const RunConfig config = parse_config(docs[i]);
        runs[i].outcome = execute_run(config, runs[i].csv_path);
      } catch (const ConfigError& e) {
        runs[i].outcome.exit_code = 1;
        runs[i].outcome.message = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(spec.parallelism, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string index = "run,label,exit_code,status,termination,rows,csv";
  for (const auto& a : spec.axes) index += "," + csv_escape(a.key);
  index += ",message\n";
  for (const auto& r : runs) {
    const int code = r.outcome.exit_code;
    const char* status = code == 0 ? "ok" : code == 2 ? "numerical_failure" : "error";
    index += std::to_string(r.index) + "," + csv_escape(r.label) + "," + std::to_string(code) + "," + status +
             "," + std::string(to_string(r.outcome.termination)) + "," + std::to_string(r.outcome.rows_written) +
             "," + csv_escape(fs::path(r.csv_path).filename().string());
    for (const auto& s : r.settings) index += "," + csv_escape(s);
    std::string msg = r.outcome.message;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    index += "," + csv_escape(msg) + "\n";
  }
  write_text_file((fs::path(spec.output_dir) / "index.csv").string(), index);
  return runs;
}

}  // namespace demag
