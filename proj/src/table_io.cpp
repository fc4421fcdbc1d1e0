#include "table_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "constants.hpp"
#include "json.hpp"
#include "units.hpp"

#ifndef DEMAG_BUILD_ID
#define DEMAG_BUILD_ID "demag-dev"
#endif

namespace demag {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string io_reason() { return std::strerror(errno); }

}  // namespace

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + io_reason());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed: " + io_reason());
}

Table trajectory_table(const std::vector<TrajectoryRecord>& records) {
  Table t;
  t.columns = split(kTrajectoryHeader, ',');
  t.rows.reserve(records.size());
  for (const auto& r : records)
    t.rows.push_back({r.t, r.temperature, r.field, r.eta, r.n1, r.n2, r.vbar, r.n0, r.rho, r.gamma_sc,
                      r.beta_fwd, r.chi_inst});
  return t;
}

std::vector<TrajectoryRecord> trajectory_from_table(const Table& table) {
  if (table.columns != split(kTrajectoryHeader, ','))
    throw IoError("table does not carry the trajectory header");
  std::vector<TrajectoryRecord> out;
  out.reserve(table.rows.size());
  for (const auto& v : table.rows)
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]});
  return out;
}

void write_table_csv(const Table& table, const std::string& path) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) text += ',';
    text += table.columns[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw IoError("'" + path + "': row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += units::format_number(row[i]);
    }
    text += '\n';
  }
  write_text_file(path, text);
}

Table read_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + io_reason());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "': missing header");
  t.columns = split(line, ',');
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.columns.size())
      throw IoError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                    std::to_string(t.columns.size()) + " fields");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(units::parse_number(c));
      } catch (const std::invalid_argument&) {
        throw IoError("'" + path + "' line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_trajectory_csv(const std::vector<TrajectoryRecord>& records, const std::string& path) {
  write_table_csv(trajectory_table(records), path);
}

std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path) {
  return trajectory_from_table(read_table_csv(path));
}

RunMetadata describe_run(const RunConfig& config, const Trajectory& trajectory, std::size_t rows_written) {
  RunMetadata m;
  m.config = config;
  m.termination = trajectory.termination;
  m.records = trajectory.records.size();
  m.rows_written = rows_written;
  m.clamp_events = trajectory.clamp_events;
  if (!trajectory.step_errors.empty())
    m.max_step_error = *std::max_element(trajectory.step_errors.begin(), trajectory.step_errors.end());
  if (trajectory.records.size() >= 2) m.max_chi = compute_chi(trajectory.records).max_chi;
  return m;
}

std::string build_id() { return DEMAG_BUILD_ID; }

std::string metadata_json(const RunMetadata& meta) {
  json doc = json::object();
  doc["config"] = meta.config ? json::parse(render_config(*meta.config)) : json(nullptr);
  doc["constants"] = {
      {"hbar_J_s", constants::hbar},
      {"k_B_J_per_K", constants::k_B},
      {"mu_B_J_per_T", constants::mu_B},
      {"mu_0_T_m_per_A", constants::mu_0},
      {"atomic_mass_unit_kg", constants::atomic_mass_unit},
  };
  doc["build"] = build_id();
  doc["termination"] = std::string(to_string(meta.termination));
  doc["truncated"] = meta.truncated;
  doc["error"] = meta.error.empty() ? json(nullptr) : json(meta.error);
  doc["records"] = meta.records;
  doc["rows_written"] = meta.rows_written;
  doc["clamp_events"] = meta.clamp_events;
  doc["max_step_error"] = meta.max_step_error;
  doc["max_chi"] = meta.max_chi ? json(*meta.max_chi) : json(nullptr);
  return doc.dump(2) + "\n";
}

void write_metadata(const RunMetadata& meta, const std::string& path) {
  write_text_file(path, metadata_json(meta));
}

std::string sidecar_path(const std::string& csv_path) {
  constexpr std::string_view ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  return csv_path + ".json";
}

}  // namespace demag
