#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "simulation.hpp"

namespace demag {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTrajectoryHeader =
    "t_s,T_K,B_T,eta,N1,N2,Vbar_m3,n0_m-3,rho,Gamma_sc_s-1,beta_fwd_m3s-1,chi_inst";

/// Generic numeric table; every row has one value per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table trajectory_table(const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> trajectory_from_table(const Table& table);

/// Shortest round-trip decimals, LF line endings.
void write_table_csv(const Table& table, const std::string& path);
Table read_table_csv(const std::string& path);

void write_trajectory_csv(const std::vector<TrajectoryRecord>& records, const std::string& path);
std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path);

struct RunMetadata {
  std::optional<RunConfig> config;
  Termination termination = Termination::none;
  bool truncated = false;  // run stopped on a numerical failure
  std::string error;
  std::size_t records = 0;
  std::size_t rows_written = 0;
  std::size_t clamp_events = 0;
  double max_step_error = 0.0;
  std::optional<double> max_chi;
};

RunMetadata describe_run(const RunConfig& config, const Trajectory& trajectory, std::size_t rows_written);

/// JSON sidecar: resolved config, constants, build id and run outcome.
std::string metadata_json(const RunMetadata& meta);
void write_metadata(const RunMetadata& meta, const std::string& path);

/// "run.csv" -> "run.json"; other names get ".json" appended.
std::string sidecar_path(const std::string& csv_path);

std::string build_id();

void write_text_file(const std::string& path, std::string_view content);

}  // namespace demag
