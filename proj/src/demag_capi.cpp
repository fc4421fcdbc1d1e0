#include "demag/demag.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "collision_kernel.hpp"
#include "config.hpp"
#include "constants.hpp"
#include "equilibrium.hpp"
#include "simulation.hpp"
#include "sweep.hpp"
#include "table_io.hpp"

struct demag_config {
  demag::RunConfig value;
};

struct demag_trajectory {
  demag::Trajectory value;
  std::string error;
};

namespace {

thread_local std::string last_error;

demag_status fail(demag_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps library exceptions onto status codes.
template <class Fn>
demag_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const demag::ConfigError& e) {
    return fail(DEMAG_ERR_CONFIG, e.what());
  } catch (const demag::IoError& e) {
    return fail(DEMAG_ERR_IO, e.what());
  } catch (const demag::NumericalError& e) {
    return fail(DEMAG_ERR_NUMERICAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DEMAG_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DEMAG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DEMAG_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

demag_termination to_c(demag::Termination t) {
  using demag::Termination;
  switch (t) {
    case Termination::none: return DEMAG_TERM_NONE;
    case Termination::t_max: return DEMAG_TERM_T_MAX;
    case Termination::t_floor: return DEMAG_TERM_T_FLOOR;
    case Termination::n_floor: return DEMAG_TERM_N_FLOOR;
    case Termination::rho_stall: return DEMAG_TERM_RHO_STALL;
    case Termination::numerical_failure: return DEMAG_TERM_NUMERICAL_FAILURE;
  }
  return DEMAG_TERM_NONE;
}

demag::Termination from_c(demag_termination t) {
  using demag::Termination;
  switch (t) {
    case DEMAG_TERM_NONE: return Termination::none;
    case DEMAG_TERM_T_MAX: return Termination::t_max;
    case DEMAG_TERM_T_FLOOR: return Termination::t_floor;
    case DEMAG_TERM_N_FLOOR: return Termination::n_floor;
    case DEMAG_TERM_RHO_STALL: return Termination::rho_stall;
    case DEMAG_TERM_NUMERICAL_FAILURE: return Termination::numerical_failure;
  }
  return Termination::none;
}

}  // namespace

extern "C" {

const char* demag_version(void) { return DEMAG_VERSION; }

const char* demag_build_id(void) {
  static const std::string id = demag::build_id();
  return id.c_str();
}

const char* demag_last_error(void) { return last_error.c_str(); }

void demag_string_free(char* text) { std::free(text); }

demag_status demag_config_parse(const char* text, size_t length, demag_config** out) {
  return guarded([&] {
    if (!out || (!text && length)) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    auto cfg = demag::parse_config(std::string_view(text ? text : "", length));
    *out = new demag_config{std::move(cfg)};
    return DEMAG_OK;
  });
}

demag_status demag_config_load(const char* path, demag_config** out) {
  return guarded([&] {
    if (!out || !path) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    auto cfg = demag::load_config(path);
    *out = new demag_config{std::move(cfg)};
    return DEMAG_OK;
  });
}

demag_status demag_config_render(const demag_config* config, char** out_text) {
  return guarded([&] {
    if (!config || !out_text) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out_text = duplicate(demag::render_config(config->value));
    return DEMAG_OK;
  });
}

demag_status demag_config_schema(char** out_text) {
  return guarded([&] {
    if (!out_text) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out_text = duplicate(demag::config_schema());
    return DEMAG_OK;
  });
}

const char* demag_config_output_path(const demag_config* config) {
  return config ? config->value.output_path.c_str() : nullptr;
}

demag_status demag_config_set_output_path(demag_config* config, const char* path) {
  return guarded([&] {
    if (!config || !path || !*path) return fail(DEMAG_ERR_ARGUMENT, "null or empty argument");
    config->value.output_path = path;
    return DEMAG_OK;
  });
}

size_t demag_config_max_rows(const demag_config* config) {
  return config ? config->value.integrator.max_rows : 0;
}

int demag_config_equal(const demag_config* a, const demag_config* b) {
  if (!a || !b) return 0;
  return a->value == b->value ? 1 : 0;
}

void demag_config_free(demag_config* config) { delete config; }

demag_status demag_simulate(const demag_config* config, demag_trajectory** out) {
  return guarded([&] {
    if (!config || !out) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    const auto& c = config->value;
    demag::ModelParams params;
    try {
      params = c.model_params();
    } catch (const std::exception& e) {
      return fail(DEMAG_ERR_CONFIG, e.what());
    }
    try {
      auto traj = demag::simulate(c.initial_state(), params, c.controller, c.integrator);
      *out = new demag_trajectory{std::move(traj), {}};
      return DEMAG_OK;
    } catch (const demag::SimulationError& e) {
      *out = new demag_trajectory{e.partial(), e.what()};
      return fail(DEMAG_ERR_NUMERICAL, e.what());
    } catch (const std::invalid_argument& e) {
      return fail(DEMAG_ERR_CONFIG, e.what());
    }
  });
}

size_t demag_trajectory_size(const demag_trajectory* trajectory) {
  return trajectory ? trajectory->value.records.size() : 0;
}

demag_status demag_trajectory_record(const demag_trajectory* trajectory, size_t index, demag_record* out) {
  return guarded([&] {
    if (!trajectory || !out) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    if (index >= trajectory->value.records.size()) return fail(DEMAG_ERR_ARGUMENT, "record index out of range");
    const auto& r = trajectory->value.records[index];
    *out = {r.t,    r.temperature, r.field, r.eta,      r.n1,       r.n2,
            r.vbar, r.n0,          r.rho,   r.gamma_sc, r.beta_fwd, r.chi_inst};
    return DEMAG_OK;
  });
}

demag_termination demag_trajectory_termination(const demag_trajectory* trajectory) {
  return trajectory ? to_c(trajectory->value.termination) : DEMAG_TERM_NONE;
}

const char* demag_termination_name(demag_termination termination) {
  return demag::to_string(from_c(termination)).data();
}

demag_status demag_trajectory_max_chi(const demag_trajectory* trajectory, double* out, int* defined) {
  return guarded([&] {
    if (!trajectory || !out || !defined) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    const auto chi = demag::compute_chi(trajectory->value.records);
    *defined = chi.max_chi.has_value() ? 1 : 0;
    *out = chi.max_chi.value_or(0.0);
    return DEMAG_OK;
  });
}

demag_status demag_trajectory_write_csv(const demag_trajectory* trajectory, const char* path, size_t max_rows) {
  return guarded([&] {
    if (!trajectory || !path) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    const auto& records = trajectory->value.records;
    demag::write_trajectory_csv(max_rows ? demag::decimate(records, max_rows) : records, path);
    return DEMAG_OK;
  });
}

demag_status demag_trajectory_write_metadata(const demag_trajectory* trajectory, const demag_config* config,
                                             const char* path, size_t rows_written) {
  return guarded([&] {
    if (!trajectory || !config || !path) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    auto meta = demag::describe_run(config->value, trajectory->value, rows_written);
    meta.truncated = trajectory->value.termination == demag::Termination::numerical_failure;
    meta.error = trajectory->error;
    demag::write_metadata(meta, path);
    return DEMAG_OK;
  });
}

void demag_trajectory_free(demag_trajectory* trajectory) { delete trajectory; }

demag_status demag_run(const demag_config* config, const char* csv_path, demag_termination* termination) {
  return guarded([&] {
    if (!config) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    const std::string path = csv_path ? csv_path : config->value.output_path;
    const auto outcome = demag::execute_run(config->value, path);
    if (termination) *termination = to_c(outcome.termination);
    switch (outcome.exit_code) {
      case 0: return DEMAG_OK;
      case 2: return fail(DEMAG_ERR_NUMERICAL, outcome.message);
      default: return fail(DEMAG_ERR_CONFIG, outcome.message);
    }
  });
}

demag_status demag_sweep_run(const char* spec_path, size_t* runs, size_t* failed) {
  return guarded([&] {
    if (!spec_path) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    const auto spec = demag::load_sweep(spec_path);
    const auto results = demag::run_sweep(spec);
    size_t bad = 0;
    for (const auto& r : results) bad += r.outcome.exit_code != 0;
    if (runs) *runs = results.size();
    if (failed) *failed = bad;
    return DEMAG_OK;
  });
}

demag_status demag_optimal_eta(double spin, double* out) {
  return guarded([&] {
    if (!out) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out = demag::optimal_eta(spin);
    return DEMAG_OK;
  });
}

demag_status demag_cooling_shape(double eta, double spin, double* out) {
  return guarded([&] {
    if (!out) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    if (!(spin >= 0.5) || !(eta >= 0.0)) return fail(DEMAG_ERR_ARGUMENT, "need spin >= 1/2 and eta >= 0");
    *out = demag::cooling_shape(eta, spin);
    return DEMAG_OK;
  });
}

demag_status demag_rate_profile(const demag_config* config, double spin, const double* etas, size_t count,
                                double* dtdt_out) {
  return guarded([&] {
    if ((count && (!etas || !dtdt_out))) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    demag::SpeciesModel species;
    demag::TrapPotential trap = demag::HarmonicTrap{2.0 * demag::constants::pi * 500.0};
    double atoms = 5e6;
    double temperature = 200e-6;
    if (config) {
      species = config->value.species;
      trap = config->value.trap;
      atoms = config->value.initial.atoms;
      temperature = config->value.initial.temperature;
    }
    species.spin = spin;
    species.validate();
    for (size_t i = 0; i < count; ++i)
      dtdt_out[i] = demag::cooling_rate_estimate(temperature, atoms, trap, etas[i], species);
    return DEMAG_OK;
  });
}

demag_status demag_equilibrium_temperature(double t0, double field, double spin, double alpha, double* out) {
  return guarded([&] {
    if (!out) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    *out = demag::equilibrium_temperature({t0, field, spin, alpha});
    return DEMAG_OK;
  });
}

demag_status demag_equilibrium_curve(double t0, double spin, double alpha, const double* fields, size_t count,
                                     double* splitting_out, double* ratio_out) {
  return guarded([&] {
    if (count && (!fields || !splitting_out || !ratio_out)) return fail(DEMAG_ERR_ARGUMENT, "null argument");
    const auto rows = demag::equilibrium_curve(t0, spin, alpha, std::span<const double>(fields, count));
    for (size_t i = 0; i < count; ++i) {
      splitting_out[i] = rows[i].splitting;
      ratio_out[i] = rows[i].ratio;
    }
    return DEMAG_OK;
  });
}

demag_status demag_write_table_csv(const char* path, const char* const* columns, size_t column_count,
                                   const double* data, size_t row_count) {
  return guarded([&] {
    if (!path || (column_count && !columns) || (row_count && column_count && !data))
      return fail(DEMAG_ERR_ARGUMENT, "null argument");
    demag::Table table;
    for (size_t c = 0; c < column_count; ++c) {
      if (!columns[c]) return fail(DEMAG_ERR_ARGUMENT, "null column name");
      table.columns.emplace_back(columns[c]);
    }
    table.rows.reserve(row_count);
    for (size_t r = 0; r < row_count; ++r)
      table.rows.emplace_back(data + r * column_count, data + (r + 1) * column_count);
    demag::write_table_csv(table, path);
    return DEMAG_OK;
  });
}

}  // extern "C"
