#include "simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace demag {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::none: return "none";
    case Termination::t_max: return "t_max";
    case Termination::t_floor: return "T_floor";
    case Termination::n_floor: return "N_floor";
    case Termination::rho_stall: return "rho_stall";
    case Termination::numerical_failure: return "numerical_failure";
  }
  return "none";
}

TrajectoryRecord make_record(double t, const GasState& state, const ControlChoice& choice,
                             const ModelParams& params) {
  TrajectoryRecord r;
  r.t = t;
  r.temperature = state.temperature;
  r.field = choice.control.field;
  r.eta = choice.eta;
  r.n1 = state.n1;
  r.n2 = state.n2;
  r.vbar = mean_volume(params.trap, state.temperature, params.species.mass);
  r.n0 = peak_density(state.total(), r.vbar);
  r.rho = phase_space_density(r.n0, state.temperature, params.species);
  r.gamma_sc = choice.control.gamma_sc;
  r.beta_fwd = rate_constants(state.temperature, choice.control.field, params.species, params.xsec,
                              params.rate_method)
                   .beta();
  const auto d = derivative(state, choice.control, params);
  const double dln_n = (d.dn1 + d.dn2) / state.total();
  const double dln_rho = log_psd_rate(state, d, params.trap);
  r.chi_inst = std::abs(dln_n) < 1e-12 ? dln_rho : dln_rho / (-dln_n);
  return r;
}

Trajectory simulate(const GasState& initial, const ModelParams& params,
                    const ControllerConfig& controller, const IntegratorConfig& integrator) {
  params.validate();
  controller.validate();
  integrator.validate();
  initial.validate();
  if (!is_harmonic(params.trap))
    throw std::invalid_argument("the dynamic model supports a harmonic trap only");

  Trajectory traj;
  GasState state = initial;
  double t = 0.0;
  double dt = integrator.dt_init;
  double stall_since = std::numeric_limits<double>::quiet_NaN();

  for (;;) {
    const auto choice = optimize_eta(state, params, controller);
    traj.records.push_back(make_record(t, state, choice, params));

    const auto d = derivative(state, choice.control, params);
    const double dln_rho = log_psd_rate(state, d, params.trap);
    if (dln_rho <= 0.0) {
      if (std::isnan(stall_since)) stall_since = t;
    } else {
      stall_since = std::numeric_limits<double>::quiet_NaN();
    }

    if (t >= integrator.t_max) {
      traj.termination = Termination::t_max;
    } else if (state.temperature <= integrator.temperature_floor) {
      traj.termination = Termination::t_floor;
    } else if (state.total() <= integrator.atom_floor) {
      traj.termination = Termination::n_floor;
    } else if (!std::isnan(stall_since) && t - stall_since >= integrator.stall_time) {
      traj.termination = Termination::rho_stall;
    }
    if (traj.termination != Termination::none) break;

    const double remaining = integrator.t_max - t;
    auto cfg = integrator;
    cfg.dt_min = std::min(cfg.dt_min, remaining);
    Advance adv;
    try {
      adv = adaptive_step(state, choice.control, params, std::min(dt, remaining), cfg);
    } catch (const NumericalError& e) {
      traj.termination = Termination::numerical_failure;
      throw SimulationError(e.what(), std::move(traj));
    }
    state = adv.state;
    t = adv.dt_used >= remaining ? integrator.t_max : t + adv.dt_used;
    dt = adv.dt_next;
    traj.step_errors.push_back(adv.error_norm);
    if (adv.clamped) ++traj.clamp_events;
  }
  return traj;
}

std::vector<TrajectoryRecord> decimate(const std::vector<TrajectoryRecord>& records,
                                       std::size_t max_rows) {
  if (records.size() <= max_rows || max_rows < 2) return records;
  std::vector<TrajectoryRecord> out;
  out.reserve(max_rows);
  const double t0 = records.front().t;
  const double span = records.back().t - t0;
  std::size_t next = 0;
  for (std::size_t k = 0; k + 1 < max_rows; ++k) {
    const double target = t0 + span * static_cast<double>(k) / static_cast<double>(max_rows - 1);
    while (next < records.size() - 1 && records[next].t < target) ++next;
    if (next >= records.size() - 1) break;
    out.push_back(records[next]);
    ++next;
  }
  out.push_back(records.back());
  return out;
}

ChiSeries compute_chi(const std::vector<TrajectoryRecord>& records) {
  ChiSeries out;
  const std::size_t n = records.size();
  out.chi.resize(n);
  out.running_max.assign(n, std::numeric_limits<double>::quiet_NaN());
  if (n < 2) return out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double dln_n = std::log(records[hi].atoms()) - std::log(records[lo].atoms());
    if (dln_n < -1e-12) {
      const double chi = -(std::log(records[hi].rho) - std::log(records[lo].rho)) / dln_n;
      out.chi[i] = chi;
      best = std::max(best, chi);
      out.max_chi = best;
    }
    if (out.max_chi) out.running_max[i] = best;
  }
  return out;
}

}  // namespace demag
