#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "controller.hpp"
#include "integrator.hpp"

namespace demag {

struct TrajectoryRecord {
  double t = 0.0;          // s
  double temperature = 0;  // K
  double field = 0.0;      // T
  double eta = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double vbar = 0.0;       // m^3
  double n0 = 0.0;         // m^-3
  double rho = 0.0;
  double gamma_sc = 0.0;   // 1/s
  double beta_fwd = 0.0;   // m^3/s
  double chi_inst = 0.0;

  double atoms() const { return n1 + n2; }
};

enum class Termination { none, t_max, t_floor, n_floor, rho_stall, numerical_failure };

std::string_view to_string(Termination t);

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  Termination termination = Termination::none;
  std::vector<double> step_errors;  // scaled error norm of every accepted step
  std::size_t clamp_events = 0;
};

/// Thrown when the integrator cannot make progress; carries the records
/// produced so far.
class SimulationError : public NumericalError {
 public:
  SimulationError(const std::string& what, Trajectory partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

TrajectoryRecord make_record(double t, const GasState& state, const ControlChoice& choice,
                             const ModelParams& params);

/// Closed-loop run: at every accepted step the servo sets Gamma_sc, eta_B is
/// re-optimised (B follows from the current T), and the controls are held
/// for the next step.
Trajectory simulate(const GasState& initial, const ModelParams& params,
                    const ControllerConfig& controller, const IntegratorConfig& integrator);

/// Uniform-in-time thinning to at most max_rows records; first and last kept.
std::vector<TrajectoryRecord> decimate(const std::vector<TrajectoryRecord>& records,
                                       std::size_t max_rows);

struct ChiSeries {
  std::vector<std::optional<double>> chi;  // undefined where N does not fall
  std::vector<double> running_max;         // NaN until the first defined value
  std::optional<double> max_chi;
};

/// Centred finite-difference -d ln(rho)/d ln(N) along the records.
ChiSeries compute_chi(const std::vector<TrajectoryRecord>& records);

}  // namespace demag
