#pragma once

#include <stdexcept>
#include <string>

#include "kinetics.hpp"

namespace demag {

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol_atoms = 1.0;
  double abs_tol_temperature = 1e-9;  // K
  double dt_init = 1e-4;              // s
  double dt_min = 1e-6;               // s
  double dt_max = 0.1;                // s
  double t_max = 40.0;                // s

  // Run termination and output.
  double temperature_floor = 1e-9;  // K
  double atom_floor = 100.0;
  double stall_time = 1.0;          // s of non-increasing phase-space density
  std::size_t max_rows = 10000;

  void validate() const;
  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  GasState state;
  double error_norm = 0.0;  // scaled max-norm; <= 1 means acceptable
  bool clamped = false;     // a population undershoot below abs_tol was set to zero
  bool accepted() const { return error_norm <= 1.0; }
};

/// One explicit Dormand-Prince 5(4) step with controls held fixed.
StepResult dormand_prince_step(const GasState& state, const ControlState& control,
                               const ModelParams& params, double dt, const IntegratorConfig& config);

struct Advance {
  GasState state;
  double dt_used = 0.0;
  double dt_next = 0.0;
  double error_norm = 0.0;
  bool clamped = false;
};

/// Retries with smaller steps until one is accepted. Throws NumericalError
/// when the step would drop below dt_min.
Advance adaptive_step(const GasState& state, const ControlState& control, const ModelParams& params,
                      double dt_try, const IntegratorConfig& config);

/// Integrates over `duration` with fixed controls.
GasState integrate_fixed(GasState state, const ControlState& control, const ModelParams& params,
                         double duration, const IntegratorConfig& config);

}  // namespace demag
