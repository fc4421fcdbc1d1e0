#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "controller.hpp"
#include "integrator.hpp"

namespace demag {

struct CrossSectionConfig {
  CrossSectionModel::Kind kind = CrossSectionModel::Kind::heaviside;
  std::string table;  // h(x) file, required for symmetry_function
  RateMethod rate_method = RateMethod::closed_form;
  friend bool operator==(const CrossSectionConfig&, const CrossSectionConfig&) = default;
};

struct InitialConditions {
  double atoms = 0.0;
  double temperature = 0.0;     // K
  double state2_fraction = 0.0;  // N2 / N at t = 0
  friend bool operator==(const InitialConditions&, const InitialConditions&) = default;
};

struct RunConfig {
  std::string label = "run";
  SpeciesModel species;
  TrapPotential trap = HarmonicTrap{};
  LossParams loss;
  PumpParams pump;
  CrossSectionConfig cross_section;
  ControllerConfig controller;
  IntegratorConfig integrator;
  InitialConditions initial;
  std::string output_path = "trajectory.csv";

  /// Loads the h(x) table when one is configured.
  ModelParams model_params() const;
  GasState initial_state() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigIssue {
  std::string path;  // dotted key path, empty for document-level problems
  int line = 0;      // 1-based, 0 when unknown
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

std::string format_issue(const ConfigIssue& issue);

/// Strict parse: every problem in the document is collected before throwing
/// ConfigError. Empty text is treated as an empty object.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Fully explicit JSON text (every key, canonical SI units).
std::string render_config(const RunConfig& config);

/// JSON Schema describing the accepted document, with defaults and units.
std::string config_schema();

}  // namespace demag
