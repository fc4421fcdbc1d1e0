/*
 * demag: demagnetisation cooling of an optically trapped spin-S gas.
 *
 * Plain C interface to the simulation library. Objects are opaque handles
 * owned by the caller and released with the matching *_free function.
 * Every fallible call returns a demag_status; on failure a description is
 * available from demag_last_error() on the same thread until the next call.
 * All physical quantities are SI (K, T, s, m, kg, rad/s).
 */
#ifndef DEMAG_DEMAG_H
#define DEMAG_DEMAG_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DEMAG_BUILDING_LIBRARY)
#    define DEMAG_API __declspec(dllexport)
#  else
#    define DEMAG_API __declspec(dllimport)
#  endif
#else
#  define DEMAG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum demag_status {
  DEMAG_OK = 0,
  DEMAG_ERR_CONFIG = 1,    /* invalid configuration or unreadable config file */
  DEMAG_ERR_NUMERICAL = 2, /* integrator could not make progress */
  DEMAG_ERR_IO = 3,        /* output could not be written */
  DEMAG_ERR_ARGUMENT = 4,  /* null handle or out-of-domain argument */
  DEMAG_ERR_INTERNAL = 5
} demag_status;

typedef enum demag_termination {
  DEMAG_TERM_NONE = 0,
  DEMAG_TERM_T_MAX = 1,
  DEMAG_TERM_T_FLOOR = 2,
  DEMAG_TERM_N_FLOOR = 3,
  DEMAG_TERM_RHO_STALL = 4,
  DEMAG_TERM_NUMERICAL_FAILURE = 5
} demag_termination;

typedef struct demag_config demag_config;
typedef struct demag_trajectory demag_trajectory;

/* One row of the trajectory, in the same order as the CSV columns. */
typedef struct demag_record {
  double t;           /* s */
  double temperature; /* K */
  double field;       /* T */
  double eta;         /* Zeeman splitting over k_B T */
  double n1;
  double n2;
  double vbar;     /* m^3 */
  double n0;       /* m^-3 */
  double rho;      /* phase-space density */
  double gamma_sc; /* 1/s */
  double beta_fwd; /* m^3/s */
  double chi_inst; /* instantaneous efficiency used by the eta optimiser */
} demag_record;

DEMAG_API const char* demag_version(void);
DEMAG_API const char* demag_build_id(void);
DEMAG_API const char* demag_last_error(void);
DEMAG_API void demag_string_free(char* text);

/* ---- configuration ---- */

DEMAG_API demag_status demag_config_parse(const char* text, size_t length, demag_config** out);
DEMAG_API demag_status demag_config_load(const char* path, demag_config** out);
/* Fully explicit JSON with canonical SI units; free with demag_string_free. */
DEMAG_API demag_status demag_config_render(const demag_config* config, char** out_text);
DEMAG_API demag_status demag_config_schema(char** out_text);
DEMAG_API const char* demag_config_output_path(const demag_config* config);
DEMAG_API demag_status demag_config_set_output_path(demag_config* config, const char* path);
/* Output row cap configured for trajectory CSVs. */
DEMAG_API size_t demag_config_max_rows(const demag_config* config);
DEMAG_API int demag_config_equal(const demag_config* a, const demag_config* b);
DEMAG_API void demag_config_free(demag_config* config);

/* ---- simulation ---- */

/* On DEMAG_ERR_NUMERICAL *out still receives the partial trajectory. */
DEMAG_API demag_status demag_simulate(const demag_config* config, demag_trajectory** out);
DEMAG_API size_t demag_trajectory_size(const demag_trajectory* trajectory);
DEMAG_API demag_status demag_trajectory_record(const demag_trajectory* trajectory, size_t index,
                                               demag_record* out);
DEMAG_API demag_termination demag_trajectory_termination(const demag_trajectory* trajectory);
DEMAG_API const char* demag_termination_name(demag_termination termination);
/* *defined is 0 when N never decreased between records. */
DEMAG_API demag_status demag_trajectory_max_chi(const demag_trajectory* trajectory, double* out,
                                                int* defined);
/* Writes at most max_rows rows (uniform-in-time thinning, 0 = no limit). */
DEMAG_API demag_status demag_trajectory_write_csv(const demag_trajectory* trajectory, const char* path,
                                                  size_t max_rows);
/* JSON sidecar with the resolved config, constants, build id and outcome. */
DEMAG_API demag_status demag_trajectory_write_metadata(const demag_trajectory* trajectory,
                                                       const demag_config* config, const char* path,
                                                       size_t rows_written);
DEMAG_API void demag_trajectory_free(demag_trajectory* trajectory);

/* Simulate and write the CSV plus sidecar. csv_path may be NULL to use the
 * configured output path; termination may be NULL. */
DEMAG_API demag_status demag_run(const demag_config* config, const char* csv_path,
                                 demag_termination* termination);

/* Runs a sweep spec file; writes per-run CSVs and index.csv. */
DEMAG_API demag_status demag_sweep_run(const char* spec_path, size_t* runs, size_t* failed);

/* ---- analysis ---- */

/* Cutoff maximising the analytic cooling rate of a polarised cloud. */
DEMAG_API demag_status demag_optimal_eta(double spin, double* out);

/* Dimensionless eta dependence of the analytic cooling rate. */
DEMAG_API demag_status demag_cooling_shape(double eta, double spin, double* out);

/* Analytic dT/dt (K/s) for each eta, using trap, atom number and temperature
 * from config (NULL selects 5e6 atoms at 200 uK in a 500 Hz harmonic trap)
 * and the given spin. */
DEMAG_API demag_status demag_rate_profile(const demag_config* config, double spin, const double* etas,
                                          size_t count, double* dtdt_out);

DEMAG_API demag_status demag_equilibrium_temperature(double t0, double field, double spin, double alpha,
                                                     double* out);
/* splitting_out[i] = 2 mu_B B_i / (k_B t0), ratio_out[i] = T_eq / t0. */
DEMAG_API demag_status demag_equilibrium_curve(double t0, double spin, double alpha, const double* fields,
                                               size_t count, double* splitting_out, double* ratio_out);

/* Numeric CSV with shortest round-trip formatting; data is row-major. */
DEMAG_API demag_status demag_write_table_csv(const char* path, const char* const* columns, size_t column_count,
                                             const double* data, size_t row_count);

#ifdef __cplusplus
}
#endif

#endif /* DEMAG_DEMAG_H */
