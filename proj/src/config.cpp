#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "units.hpp"

namespace demag {

using json = nlohmann::ordered_json;
using units::Dimension;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class FieldType { quantity, number, count, text, choice };

struct Range {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = false;
  bool allow_inf = false;

  bool contains(double v) const {
    if (std::isnan(v)) return false;
    if (std::isinf(v) && !allow_inf) return false;
    if (lo_open ? !(v > lo) : !(v >= lo)) return false;
    if (hi_open ? !(v < hi) : !(v <= hi)) return false;
    return true;
  }
  std::string describe() const {
    std::string out = lo_open ? "(" : "[";
    out += std::isinf(lo) ? "-inf" : units::format_number(lo);
    out += ", ";
    out += std::isinf(hi) ? "inf" : units::format_number(hi);
    out += hi_open ? ")" : "]";
    return out;
  }
};

Range positive(bool allow_inf = false) { return {0.0, kInf, true, false, allow_inf}; }
Range non_negative() { return {0.0, kInf, false, false, false}; }
Range unit_interval(bool lo_open, bool hi_open) { return {0.0, 1.0, lo_open, hi_open, false}; }

struct Field {
  std::string section;  // empty for top-level keys
  std::string key;
  FieldType type = FieldType::number;
  Dimension dim = Dimension::time;
  bool required = false;
  Range range;
  std::vector<std::string> choices;
  std::string help;
  std::function<void(RunConfig&, double)> set_number;
  std::function<double(const RunConfig&)> get_number;
  std::function<void(RunConfig&, const std::string&)> set_text;
  std::function<std::string(const RunConfig&)> get_text;

  std::string path() const { return section.empty() ? key : section + "." + key; }
};

template <class Member>
Field quantity(std::string section, std::string key, Dimension dim, Range range, bool required,
               std::string help, Member member) {
  Field f;
  f.section = std::move(section);
  f.key = std::move(key);
  f.type = FieldType::quantity;
  f.dim = dim;
  f.range = range;
  f.required = required;
  f.help = std::move(help);
  f.set_number = [member](RunConfig& c, double v) { member(c) = v; };
  f.get_number = [member](const RunConfig& c) { return member(const_cast<RunConfig&>(c)); };
  return f;
}

template <class Member>
Field number(std::string section, std::string key, Range range, bool required, std::string help,
             Member member) {
  Field f = quantity(std::move(section), std::move(key), Dimension::time, range, required,
                     std::move(help), member);
  f.type = FieldType::number;
  return f;
}

template <class Get, class Set>
Field choice(std::string section, std::string key, std::vector<std::string> choices, std::string help,
             Get get, Set set) {
  Field f;
  f.section = std::move(section);
  f.key = std::move(key);
  f.type = FieldType::choice;
  f.choices = std::move(choices);
  f.help = std::move(help);
  f.get_text = get;
  f.set_text = set;
  return f;
}

template <class Member>
Field text(std::string section, std::string key, std::string help, Member member) {
  Field f;
  f.section = std::move(section);
  f.key = std::move(key);
  f.type = FieldType::text;
  f.help = std::move(help);
  f.get_text = [member](const RunConfig& c) { return member(const_cast<RunConfig&>(c)); };
  f.set_text = [member](RunConfig& c, const std::string& v) { member(c) = v; };
  return f;
}

HarmonicTrap& harmonic(RunConfig& c) {
  if (!std::holds_alternative<HarmonicTrap>(c.trap)) c.trap = HarmonicTrap{};
  return std::get<HarmonicTrap>(c.trap);
}

std::string kind_name(CrossSectionModel::Kind k) {
  return k == CrossSectionModel::Kind::heaviside ? "heaviside" : "symmetry_function";
}
std::string method_name(RateMethod m) { return m == RateMethod::closed_form ? "closed_form" : "quadrature"; }
std::string objective_name(EtaObjective o) {
  return o == EtaObjective::efficiency ? "efficiency" : "cooling_rate";
}

// Trap keys other than "kind" depend on the kind and are handled separately.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(text("", "label", "Run label echoed into the metadata.",
                     [](RunConfig& c) -> std::string& { return c.label; }));

    f.push_back(quantity("species", "mass", Dimension::mass, positive(), false, "Atomic mass.",
                         [](RunConfig& c) -> double& { return c.species.mass; }));
    f.push_back(number("species", "spin", {0.5, kInf}, false, "Electronic spin S (integer or half-integer).",
                       [](RunConfig& c) -> double& { return c.species.spin; }));
    f.push_back(quantity("species", "pump_wavelength", Dimension::length, positive(), false,
                         "Optical pumping wavelength.",
                         [](RunConfig& c) -> double& { return c.species.pump_wavelength; }));
    f.push_back(number("species", "kappa", unit_interval(false, true), false,
                       "Probability that a pump cycle ends in state 2 instead of the dark state.",
                       [](RunConfig& c) -> double& { return c.species.kappa; }));

    f.push_back(quantity("trap", "mean_frequency", Dimension::angular_rate, positive(), true,
                         "Geometric mean trap frequency (harmonic trap).",
                         [](RunConfig& c) -> double& { return harmonic(c).mean_angular_frequency; }));

    f.push_back(quantity("loss", "background_lifetime", Dimension::time, positive(true), true,
                         "Background-gas lifetime; \"inf s\" disables it.",
                         [](RunConfig& c) -> double& { return c.loss.tau_bg; }));
    f.push_back(quantity("loss", "three_body_rate", Dimension::three_body_rate, non_negative(), true,
                         "Three-body loss rate constant.",
                         [](RunConfig& c) -> double& { return c.loss.l3b; }));

    f.push_back(number("pump", "polarization_impurity", unit_interval(false, true), true,
                       "Fraction of pump light that can excite the dark state.",
                       [](RunConfig& c) -> double& { return c.pump.impurity; }));
    f.push_back(number("pump", "target_ratio", unit_interval(true, true), true,
                       "N2/N1 held by the scattering-rate servo.",
                       [](RunConfig& c) -> double& { return c.pump.target_ratio; }));
    f.push_back(quantity("pump", "gamma_min", Dimension::rate, positive(), false,
                         "Lower bound of the photon scattering rate.",
                         [](RunConfig& c) -> double& { return c.pump.gamma_min; }));
    f.push_back(quantity("pump", "gamma_max", Dimension::rate, positive(), false,
                         "Upper bound of the photon scattering rate.",
                         [](RunConfig& c) -> double& { return c.pump.gamma_max; }));

    f.push_back(choice(
        "cross_section", "model", {"heaviside", "symmetry_function"},
        "Threshold approximation, or an explicit symmetry function read from `table`.",
        [](const RunConfig& c) { return kind_name(c.cross_section.kind); },
        [](RunConfig& c, const std::string& v) {
          c.cross_section.kind = v == "heaviside" ? CrossSectionModel::Kind::heaviside
                                                  : CrossSectionModel::Kind::symmetry_function;
        }));
    f.push_back(text("cross_section", "table", "Two-column x, h(x) file for the symmetry_function model.",
                     [](RunConfig& c) -> std::string& { return c.cross_section.table; }));
    f.push_back(choice(
        "cross_section", "rate_method", {"closed_form", "quadrature"},
        "How rate constants are evaluated; closed_form applies to the heaviside model only.",
        [](const RunConfig& c) { return method_name(c.cross_section.rate_method); },
        [](RunConfig& c, const std::string& v) {
          c.cross_section.rate_method = v == "closed_form" ? RateMethod::closed_form : RateMethod::quadrature;
        }));

    f.push_back(number("controller", "eta_min", positive(), false, "Lower bound for the field cutoff eta_B.",
                       [](RunConfig& c) -> double& { return c.controller.eta_min; }));
    f.push_back(number("controller", "eta_max", positive(), false, "Upper bound for eta_B.",
                       [](RunConfig& c) -> double& { return c.controller.eta_max; }));
    f.push_back(number("controller", "optimizer_tol", positive(), false, "Golden-section tolerance on eta_B.",
                       [](RunConfig& c) -> double& { return c.controller.optimizer_tol; }));
    f.push_back(choice(
        "controller", "objective", {"efficiency", "cooling_rate"},
        "Per-step eta_B objective: instantaneous chi, or -dT/dt.",
        [](const RunConfig& c) { return objective_name(c.controller.objective); },
        [](RunConfig& c, const std::string& v) {
          c.controller.objective = v == "efficiency" ? EtaObjective::efficiency : EtaObjective::cooling_rate;
        }));
    f.push_back(quantity("controller", "servo_gain", Dimension::rate, non_negative(), false,
                         "Proportional pull of N2/N1 towards the target inside the servo band.",
                         [](RunConfig& c) -> double& { return c.controller.servo_gain; }));

    f.push_back(number("integrator", "rel_tol", positive(), false, "Relative error tolerance per step.",
                       [](RunConfig& c) -> double& { return c.integrator.rel_tol; }));
    f.push_back(number("integrator", "abs_tol_atoms", positive(), false, "Absolute tolerance on N1 and N2.",
                       [](RunConfig& c) -> double& { return c.integrator.abs_tol_atoms; }));
    f.push_back(quantity("integrator", "abs_tol_temperature", Dimension::temperature, positive(), false,
                         "Absolute tolerance on T.",
                         [](RunConfig& c) -> double& { return c.integrator.abs_tol_temperature; }));
    f.push_back(quantity("integrator", "dt_init", Dimension::time, positive(), false, "First trial step.",
                         [](RunConfig& c) -> double& { return c.integrator.dt_init; }));
    f.push_back(quantity("integrator", "dt_min", Dimension::time, positive(), false,
                         "Smallest step before the run fails.",
                         [](RunConfig& c) -> double& { return c.integrator.dt_min; }));
    f.push_back(quantity("integrator", "dt_max", Dimension::time, positive(), false, "Largest step.",
                         [](RunConfig& c) -> double& { return c.integrator.dt_max; }));
    f.push_back(quantity("integrator", "t_max", Dimension::time, positive(), false, "End time.",
                         [](RunConfig& c) -> double& { return c.integrator.t_max; }));
    f.push_back(quantity("integrator", "temperature_floor", Dimension::temperature, non_negative(), false,
                         "Stop once T falls to this value.",
                         [](RunConfig& c) -> double& { return c.integrator.temperature_floor; }));
    f.push_back(number("integrator", "atom_floor", non_negative(), false, "Stop once N falls to this value.",
                       [](RunConfig& c) -> double& { return c.integrator.atom_floor; }));
    f.push_back(quantity("integrator", "stall_time", Dimension::time, positive(), false,
                         "Stop after phase-space density has not grown for this long.",
                         [](RunConfig& c) -> double& { return c.integrator.stall_time; }));
    {
      Field rows;
      rows.section = "integrator";
      rows.key = "max_rows";
      rows.type = FieldType::count;
      rows.range = {2.0, 1e15};
      rows.help = "Row cap of the output CSV.";
      rows.set_number = [](RunConfig& c, double v) { c.integrator.max_rows = static_cast<std::size_t>(v); };
      rows.get_number = [](const RunConfig& c) { return static_cast<double>(c.integrator.max_rows); };
      f.push_back(std::move(rows));
    }

    f.push_back(number("initial", "atoms", positive(), true, "Initial atom number.",
                       [](RunConfig& c) -> double& { return c.initial.atoms; }));
    f.push_back(quantity("initial", "temperature", Dimension::temperature, positive(), true,
                         "Initial temperature.",
                         [](RunConfig& c) -> double& { return c.initial.temperature; }));
    f.push_back(number("initial", "state2_fraction", unit_interval(false, true), false,
                       "Fraction of atoms initially in state 2 (0 = fully polarised).",
                       [](RunConfig& c) -> double& { return c.initial.state2_fraction; }));

    f.push_back(text("output", "path", "Trajectory CSV path; the metadata sidecar gets a .json suffix.",
                     [](RunConfig& c) -> std::string& { return c.output_path; }));
    return f;
  }();
  return table;
}

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> order{"species", "trap",       "loss",    "pump",  "cross_section",
                                              "controller", "integrator", "initial", "output"};
  return order;
}

class Collector {
 public:
  explicit Collector(std::string_view text) : text_(text) {}

  void add(const std::string& path, std::string message) {
    issues_.push_back({path, line_of(path), std::move(message)});
  }
  void add_at_line(int line, std::string message) { issues_.push_back({"", line, std::move(message)}); }
  bool empty() const { return issues_.empty(); }
  std::vector<ConfigIssue> take() { return std::move(issues_); }

  // Follows the dotted path through the text, one quoted key at a time.
  // Falls back to the deepest ancestor that was found.
  int line_of(const std::string& path) const {
    std::size_t pos = 0;
    bool found = false;
    std::size_t start = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      const std::size_t hit = text_.find("\"" + key + "\"", found ? pos + 1 : 0);
      if (hit == std::string_view::npos) break;
      pos = hit;
      found = true;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (!found) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

 private:
  std::string_view text_;
  std::vector<ConfigIssue> issues_;
};

const char* type_name(const json& j) {
  return j.type_name();
}

void read_field(const Field& f, const json& value, RunConfig& config, Collector& errors) {
  const std::string path = f.path();
  switch (f.type) {
    case FieldType::quantity: {
      if (value.is_number()) {
        errors.add(path, "missing unit: write \"<value> <unit>\" with unit one of " +
                             units::accepted_units(f.dim));
        return;
      }
      if (!value.is_string()) {
        errors.add(path, std::string("expected a quantity string, got ") + type_name(value));
        return;
      }
      double v = 0.0;
      try {
        v = units::parse(value.get<std::string>(), f.dim);
      } catch (const std::invalid_argument& e) {
        errors.add(path, e.what());
        return;
      }
      if (!f.range.contains(v)) {
        errors.add(path, "value " + units::render(v, f.dim) + " out of range " + f.range.describe());
        return;
      }
      f.set_number(config, v);
      return;
    }
    case FieldType::number:
    case FieldType::count: {
      if (!value.is_number()) {
        errors.add(path, std::string("expected a number, got ") + type_name(value));
        return;
      }
      const double v = value.get<double>();
      if (f.type == FieldType::count && !(std::floor(v) == v)) {
        errors.add(path, "expected an integer");
        return;
      }
      if (!f.range.contains(v)) {
        errors.add(path, "value " + units::format_number(v) + " out of range " + f.range.describe());
        return;
      }
      f.set_number(config, v);
      return;
    }
    case FieldType::text: {
      if (!value.is_string()) {
        errors.add(path, std::string("expected a string, got ") + type_name(value));
        return;
      }
      f.set_text(config, value.get<std::string>());
      return;
    }
    case FieldType::choice: {
      if (!value.is_string()) {
        errors.add(path, std::string("expected a string, got ") + type_name(value));
        return;
      }
      const auto v = value.get<std::string>();
      if (std::find(f.choices.begin(), f.choices.end(), v) == f.choices.end()) {
        std::string allowed;
        for (const auto& c : f.choices) allowed += (allowed.empty() ? "" : ", ") + c;
        errors.add(path, "unknown value '" + v + "' (expected one of " + allowed + ")");
        return;
      }
      f.set_text(config, v);
      return;
    }
  }
}

json write_field(const Field& f, const RunConfig& c) {
  switch (f.type) {
    case FieldType::quantity: return units::render(f.get_number(c), f.dim);
    case FieldType::number: return f.get_number(c);
    case FieldType::count: return static_cast<std::uint64_t>(f.get_number(c));
    case FieldType::text:
    case FieldType::choice: return f.get_text(c);
  }
  return nullptr;
}

std::string coefficient_unit(double exponent) { return "J/m^" + units::format_number(exponent); }

// Coefficient strings carry "J/m^<n>" where n is the matching exponent.
double parse_coefficient(const std::string& s, double exponent) {
  std::size_t space = s.find_last_of(' ');
  if (space == std::string::npos) throw std::invalid_argument("missing unit (expected \"<c> " + coefficient_unit(exponent) + "\")");
  const std::string unit = s.substr(space + 1);
  if (unit != coefficient_unit(exponent))
    throw std::invalid_argument("unit '" + unit + "' does not match exponent (expected " +
                                coefficient_unit(exponent) + ")");
  return units::parse_number(s.substr(0, space));
}

void read_trap(const json& section, RunConfig& config, Collector& errors) {
  std::string kind = "harmonic";
  if (section.contains("kind")) {
    const auto& k = section["kind"];
    if (!k.is_string() || (k != "harmonic" && k != "power_law")) {
      errors.add("trap.kind", "expected \"harmonic\" or \"power_law\"");
      return;
    }
    kind = k.get<std::string>();
  }
  const std::vector<std::string> allowed =
      kind == "harmonic" ? std::vector<std::string>{"kind", "mean_frequency"}
                         : std::vector<std::string>{"kind", "exponents", "coefficients"};
  for (const auto& [key, value] : section.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      errors.add("trap." + key, "unknown key for a " + kind + " trap");
  }

  if (kind == "harmonic") {
    config.trap = HarmonicTrap{};
    for (const auto& f : fields()) {
      if (f.section != "trap") continue;
      if (section.contains(f.key))
        read_field(f, section[f.key], config, errors);
      else
        errors.add(f.path(), "required key missing");
    }
    return;
  }

  PowerLawTrap trap;
  bool ok = true;
  auto read_array = [&](const std::string& key) -> const json* {
    if (!section.contains(key)) {
      errors.add("trap." + key, "required key missing");
      ok = false;
      return nullptr;
    }
    const auto& a = section[key];
    if (!a.is_array() || a.size() != 3) {
      errors.add("trap." + key, "expected an array of three entries");
      ok = false;
      return nullptr;
    }
    return &a;
  };
  if (const json* e = read_array("exponents")) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& v = (*e)[i];
      if (!v.is_number() || !(v.get<double>() >= 1.0) || !std::isfinite(v.get<double>())) {
        errors.add("trap.exponents", "entries must be finite numbers >= 1");
        ok = false;
        break;
      }
      trap.exponents[i] = v.get<double>();
    }
  }
  if (const json* c = read_array("coefficients"); c && ok) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& v = (*c)[i];
      if (!v.is_string()) {
        errors.add("trap.coefficients", "entries must be strings \"<c> " + coefficient_unit(trap.exponents[i]) + "\"");
        ok = false;
        break;
      }
      try {
        trap.coefficients[i] = parse_coefficient(v.get<std::string>(), trap.exponents[i]);
      } catch (const std::invalid_argument& ex) {
        errors.add("trap.coefficients", ex.what());
        ok = false;
        break;
      }
      if (!(trap.coefficients[i] > 0.0) || !std::isfinite(trap.coefficients[i])) {
        errors.add("trap.coefficients", "coefficients must be positive and finite");
        ok = false;
        break;
      }
    }
  }
  if (ok) config.trap = trap;
}

json write_trap(const TrapPotential& trap) {
  json out = json::object();
  if (const auto* h = std::get_if<HarmonicTrap>(&trap)) {
    out["kind"] = "harmonic";
    out["mean_frequency"] = units::render(h->mean_angular_frequency, Dimension::angular_rate);
    return out;
  }
  const auto& p = std::get<PowerLawTrap>(trap);
  out["kind"] = "power_law";
  out["exponents"] = json::array({p.exponents[0], p.exponents[1], p.exponents[2]});
  json coeffs = json::array();
  for (std::size_t i = 0; i < 3; ++i)
    coeffs.push_back(units::format_number(p.coefficients[i]) + " " + coefficient_unit(p.exponents[i]));
  out["coefficients"] = coeffs;
  return out;
}

// Constraints that span several keys, reported against their section.
void cross_checks(const RunConfig& c, Collector& errors) {
  auto check = [&](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      errors.add(path, e.what());
    }
  };
  check("species", [&] { c.species.validate(); });
  check("pump", [&] { c.pump.validate(); });
  check("controller", [&] { c.controller.validate(); });
  check("integrator", [&] { c.integrator.validate(); });
  if (c.cross_section.kind == CrossSectionModel::Kind::symmetry_function && c.cross_section.table.empty())
    errors.add("cross_section.table", "required when model is symmetry_function");
  if (c.output_path.empty()) errors.add("output.path", "must not be empty");
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
        std::string msg = std::to_string(issues.size()) + " configuration error(s)";
        for (const auto& i : issues) msg += "\n  " + format_issue(i);
        return msg;
      }()),
      issues_(std::move(issues)) {}

std::string format_issue(const ConfigIssue& issue) {
  std::string out;
  if (issue.line > 0) out += "line " + std::to_string(issue.line) + ": ";
  if (!issue.path.empty()) out += issue.path + ": ";
  return out + issue.message;
}

ModelParams RunConfig::model_params() const {
  ModelParams p;
  p.species = species;
  p.trap = trap;
  p.loss = loss;
  p.pump = pump;
  p.rate_method = cross_section.rate_method;
  if (cross_section.kind == CrossSectionModel::Kind::symmetry_function)
    p.xsec = CrossSectionModel::symmetry_function(
        std::make_shared<const SymmetryTable>(SymmetryTable::load(cross_section.table)));
  return p;
}

GasState RunConfig::initial_state() const {
  const double n2 = initial.atoms * initial.state2_fraction;
  return {initial.atoms - n2, n2, initial.temperature};
}

RunConfig parse_config(std::string_view text) {
  Collector errors(text);
  json doc;
  const bool blank = std::all_of(text.begin(), text.end(), [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
  });
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
      errors.add_at_line(line, std::string("malformed JSON: ") + e.what());
      throw ConfigError(errors.take());
    }
  }
  if (!doc.is_object()) {
    errors.add_at_line(1, "top level must be an object");
    throw ConfigError(errors.take());
  }

  RunConfig config;
  const auto& sections = section_order();
  for (const auto& [key, value] : doc.items()) {
    const bool is_section = std::find(sections.begin(), sections.end(), key) != sections.end();
    if (key == "label") continue;
    if (!is_section) {
      errors.add(key, "unknown key");
    } else if (!value.is_object()) {
      errors.add(key, "expected an object");
    }
  }

  for (const auto& section : sections) {
    const json empty = json::object();
    const json& body = doc.contains(section) && doc[section].is_object() ? doc[section] : empty;
    if (section == "trap") {
      read_trap(body, config, errors);
      continue;
    }
    for (const auto& [key, value] : body.items()) {
      const bool known = std::any_of(fields().begin(), fields().end(),
                                     [&](const Field& f) { return f.section == section && f.key == key; });
      if (!known) errors.add(section + "." + key, "unknown key");
    }
    for (const auto& f : fields()) {
      if (f.section != section) continue;
      if (body.contains(f.key))
        read_field(f, body[f.key], config, errors);
      else if (f.required)
        errors.add(f.path(), "required key missing");
    }
  }
  if (doc.contains("label")) {
    for (const auto& f : fields())
      if (f.section.empty() && f.key == "label") read_field(f, doc["label"], config, errors);
  }

  if (errors.empty()) cross_checks(config, errors);
  if (!errors.empty()) throw ConfigError(errors.take());
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{"", 0, "cannot open config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& config) {
  json doc = json::object();
  doc["label"] = config.label;
  for (const auto& section : section_order()) {
    if (section == "trap") {
      doc["trap"] = write_trap(config.trap);
      continue;
    }
    json body = json::object();
    for (const auto& f : fields())
      if (f.section == section) body[f.key] = write_field(f, config);
    doc[section] = body;
  }
  return doc.dump(2) + "\n";
}

std::string config_schema() {
  const RunConfig defaults;
  json schema = json::object();
  schema["$schema"] = "http://json-schema.org/draft-07/schema#";
  schema["title"] = "demag run configuration";
  schema["description"] =
      "Quantities are strings \"<number> <unit>\"; the listed default is used when an optional key is absent.";
  schema["type"] = "object";
  schema["additionalProperties"] = false;
  json props = json::object();
  props["label"] = {{"type", "string"}, {"default", defaults.label}, {"description", "Run label echoed into the metadata."}};
  std::vector<std::string> top_required;
  for (const auto& section : section_order()) {
    json sec = {{"type", "object"}, {"additionalProperties", false}};
    json sp = json::object();
    std::vector<std::string> required;
    if (section == "trap") {
      sec["description"] =
          "kind \"harmonic\" takes mean_frequency; kind \"power_law\" takes exponents [n1,n2,n3] and "
          "coefficients [\"<c> J/m^<n>\", ...]. The time-dependent simulation accepts harmonic traps only.";
      sp["kind"] = {{"enum", {"harmonic", "power_law"}}, {"default", "harmonic"}};
      sp["exponents"] = {{"type", "array"}, {"minItems", 3}, {"maxItems", 3}, {"items", {{"type", "number"}, {"minimum", 1}}}};
      sp["coefficients"] = {{"type", "array"}, {"minItems", 3}, {"maxItems", 3}, {"items", {{"type", "string"}}}};
    }
    for (const auto& f : fields()) {
      if (f.section != section) continue;
      json p = json::object();
      p["description"] = f.help;
      switch (f.type) {
        case FieldType::quantity:
          p["type"] = "string";
          p["units"] = units::accepted_units(f.dim);
          p["range_si"] = f.range.describe();
          break;
        case FieldType::number:
          p["type"] = "number";
          p["range"] = f.range.describe();
          break;
        case FieldType::count:
          p["type"] = "integer";
          p["minimum"] = f.range.lo;
          break;
        case FieldType::text: p["type"] = "string"; break;
        case FieldType::choice: p["enum"] = f.choices; break;
      }
      if (f.required)
        required.push_back(f.key);
      else
        p["default"] = write_field(f, defaults);
      sp[f.key] = p;
    }
    sec["properties"] = sp;
    if (!required.empty()) {
      sec["required"] = required;
      top_required.push_back(section);
    }
    props[section] = sec;
  }
  schema["properties"] = props;
  schema["required"] = top_required;
  return schema.dump(2) + "\n";
}

}  // namespace demag
