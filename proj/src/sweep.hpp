#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "simulation.hpp"

namespace demag {

/// Outcome of one configured run whose CSV and sidecar have been written.
struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 config or I/O error, 2 numerical failure
  Termination termination = Termination::none;
  std::size_t rows_written = 0;
  std::string message;
};

/// Simulates, then writes the (decimated) trajectory CSV and its sidecar.
/// A numerical failure still writes the partial trajectory, flagged as truncated.
RunOutcome execute_run(const RunConfig& config, const std::string& csv_path);

struct SweepAxis {
  std::string key;                  // dotted config path, e.g. "pump.target_ratio"
  std::vector<std::string> values;  // JSON text of each value
};

struct SweepSpec {
  std::string base;  // JSON text of the base configuration
  std::vector<SweepAxis> axes;
  unsigned parallelism = 1;
  std::string output_dir = ".";

  std::size_t run_count() const;
};

/// Relative "base" file paths and output_dir are resolved against base_dir.
SweepSpec parse_sweep(std::string_view text, const std::string& base_dir = ".");
SweepSpec load_sweep(const std::string& path);

struct SweepRun {
  std::size_t index = 0;
  std::string label;
  std::vector<std::string> settings;  // one value per axis
  std::string csv_path;
  RunOutcome outcome;
};

/// Runs every grid point (each in its own thread slot), then writes
/// <output_dir>/index.csv listing each run once with its exit status.
std::vector<SweepRun> run_sweep(const SweepSpec& spec);

}  // namespace demag
