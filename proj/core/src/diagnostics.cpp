#include "sqglab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqglab/operators.hpp"

namespace sqglab {

namespace {

struct Sampled {
  double linf = 0.0;
  double l1 = 0.0;
};

Sampled sampled_norms(const SpectralField& f, int oversample) {
  const auto p = sample(f, oversample);
  Sampled s;
  for (double v : p.values) {
    s.linf = std::max(s.linf, std::abs(v));
    s.l1 += std::abs(v);
  }
  s.l1 /= static_cast<double>(p.values.size());
  return s;
}

Sampled sampled_norms(const VectorField& f, int oversample) {
  const auto a = sample(f.c1, oversample);
  const auto b = sample(f.c2, oversample);
  Sampled s;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double m = std::hypot(a.values[i], b.values[i]);
    s.linf = std::max(s.linf, m);
    s.l1 += m;
  }
  s.l1 /= static_cast<double>(a.values.size());
  return s;
}

long step_count(const SolverConfig& c) { return std::lround(c.t_end / c.dt); }

template <class Field>
void fill_meta(TrajectoryMeta& m, const SolverConfig& c, const Field& initial, const Field* forcing, int oversample) {
  m.equation = c.equation;
  m.nu = c.nu;
  m.gamma = c.gamma;
  m.dt = c.dt;
  m.oversample = oversample;
  const auto s0 = sampled_norms(initial, oversample);
  m.initial_l1 = s0.l1;
  m.initial_l2 = std::sqrt(l2_norm_sq(initial));
  m.initial_linf = s0.linf;
  if (forcing) {
    const auto sf = sampled_norms(*forcing, oversample);
    m.forcing_l1 = sf.l1;
    m.forcing_l2 = std::sqrt(l2_norm_sq(*forcing));
    m.forcing_linf = sf.linf;
  }
}

template <class State>
void fill_totals(TrajectoryTotals& t, const State& s) {
  t.injected = s.injected;
  t.damping = s.damping;
  t.viscous = s.viscous;
  t.residual = s.residual;
  t.steps = s.steps;
  t.substeps = s.substeps;
}

}  // namespace

std::vector<double> Trajectory::times() const { return series(&TrajectoryRecord::t); }

std::vector<double> Trajectory::series(double TrajectoryRecord::*member) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.*member);
  return out;
}

TrajectoryRecord make_record(const SqgState& state, const SolverConfig& config, int oversample) {
  const auto& theta = state.field;
  TrajectoryRecord r;
  r.t = state.t;
  r.l2sq = l2_norm_sq(theta);
  r.h12sq = h12_norm_sq(theta);
  r.gradsq = h1_seminorm_sq(theta);
  const auto s = sampled_norms(theta, oversample);
  r.linf = s.linf;
  r.l1 = s.l1;
  r.inject = config.scalar_forcing ? inner(*config.scalar_forcing, theta) : 0.0;
  r.residual = state.last_residual;
  return r;
}

TrajectoryRecord make_record(const NseState& state, const SolverConfig& config, double lambda, int oversample) {
  const auto& u = state.field;
  TrajectoryRecord r;
  r.t = state.t;
  r.l2sq = l2_norm_sq(u);
  r.h12sq = h12_norm_sq(u);
  r.gradsq = h1_seminorm_sq(u);
  const auto s = sampled_norms(u, oversample);
  r.linf = s.linf;
  r.l1 = s.l1;
  r.inject = config.velocity_forcing ? inner(*config.velocity_forcing, u) : 0.0;
  r.residual = state.last_residual;
  r.delta = r.gradsq - lambda * r.l2sq;
  if (r.l2sq > 0.0) r.mu = r.gradsq / r.l2sq;
  return r;
}

SqgRun simulate_sqg(const SolverConfig& config, SpectralField initial, const SimulationOptions& options) {
  config.validate();
  if (config.equation != Equation::SQG) throw std::invalid_argument("simulate_sqg: config is not SQG");
  if (initial.grid_ptr() != config.grid) throw std::invalid_argument("simulate_sqg: initial state grid mismatch");
  SqgRun run{{}, SqgState(std::move(initial))};
  fill_meta(run.trajectory.meta, config, run.final_state.field,
            config.scalar_forcing ? &*config.scalar_forcing : nullptr, options.oversample);
  const long steps = step_count(config);
  auto& records = run.trajectory.records;
  records.push_back(make_record(run.final_state, config, options.oversample));
  if (options.on_sqg_step) options.on_sqg_step(run.final_state);
  for (long i = 1; i <= steps; ++i) {
    run.final_state = step_sqg(run.final_state, config);
    if (options.on_sqg_step) options.on_sqg_step(run.final_state);
    if (i % config.sample_stride == 0 || i == steps) {
      records.push_back(make_record(run.final_state, config, options.oversample));
    }
  }
  fill_totals(run.trajectory.totals, run.final_state);
  return run;
}

NseRun simulate_nse(const SolverConfig& config, VelocityField initial, const SimulationOptions& options) {
  config.validate();
  if (config.equation != Equation::NSE) throw std::invalid_argument("simulate_nse: config is not NSE");
  if (initial.grid_ptr() != config.grid) throw std::invalid_argument("simulate_nse: initial state grid mismatch");
  NseRun run{{}, NseState(std::move(initial))};
  fill_meta(run.trajectory.meta, config, run.final_state.field,
            config.velocity_forcing ? &*config.velocity_forcing : nullptr, options.oversample);
  run.trajectory.meta.lambda = options.lambda;
  const long steps = step_count(config);
  auto& records = run.trajectory.records;
  records.push_back(make_record(run.final_state, config, options.lambda, options.oversample));
  if (options.on_nse_step) options.on_nse_step(run.final_state);
  for (long i = 1; i <= steps; ++i) {
    run.final_state = step_nse(run.final_state, config);
    if (options.on_nse_step) options.on_nse_step(run.final_state);
    if (i % config.sample_stride == 0 || i == steps) {
      records.push_back(make_record(run.final_state, config, options.lambda, options.oversample));
    }
  }
  fill_totals(run.trajectory.totals, run.final_state);
  return run;
}

void TimeAverage::accumulate(double w, double x) {
  weight_ += w;
  const double delta = x - mean_;
  mean_ += (w / weight_) * delta;
  m2_ += w * delta * (x - mean_);
}

void TimeAverage::add(double t, double value) {
  if (t < start_) return;
  if (count_ > 0) {
    const double w = t - last_t_;
    if (!(w >= 0.0)) throw std::invalid_argument("TimeAverage: samples must be time-ordered");
    if (w > 0.0) {
      accumulate(w, 0.5 * (last_value_ + value));
      curve_.emplace_back(t, mean_);
    }
  } else {
    mean_ = value;
  }
  last_t_ = t;
  last_value_ = value;
  ++count_;
}

double window_start(const Trajectory& trajectory, double discard_fraction) {
  if (trajectory.records.empty()) return 0.0;
  const double t0 = trajectory.records.front().t;
  const double t1 = trajectory.records.back().t;
  return t0 + discard_fraction * (t1 - t0);
}

double time_average(const Trajectory& trajectory, double TrajectoryRecord::*member, double start) {
  TimeAverage avg(start);
  for (const auto& r : trajectory.records) avg.add(r.t, r.*member);
  if (avg.samples() < 2) throw std::invalid_argument("time_average: fewer than two samples in the window");
  return avg.mean();
}

EpsilonEstimate epsilon_estimate(const Trajectory& trajectory, double nu, double start) {
  TimeAverage avg(start);
  for (const auto& r : trajectory.records) avg.add(r.t, r.gradsq);
  if (avg.samples() < 2) throw std::invalid_argument("epsilon_estimate: fewer than two samples in the window");
  EpsilonEstimate e;
  e.value = nu * avg.mean();
  e.window_start = start;
  e.horizon = avg.horizon();
  const double half = start + 0.5 * avg.horizon();
  e.limsup_proxy = e.value;
  for (const auto& [t, m] : avg.cesaro()) {
    if (t >= half) e.limsup_proxy = std::max(e.limsup_proxy, nu * m);
  }
  return e;
}

ConvergenceReport average_convergence(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw std::invalid_argument("average_convergence: size mismatch");
  if (times.size() < 10) throw std::invalid_argument("average_convergence: need at least 10 samples");
  TimeAverage avg(times.front());
  for (std::size_t i = 0; i < times.size(); ++i) avg.add(times[i], values[i]);
  ConvergenceReport rep;
  rep.cesaro = avg.cesaro();
  rep.mean = avg.mean();
  const double half = times.front() + 0.5 * (times.back() - times.front());
  double lo = rep.mean;
  double hi = rep.mean;
  for (const auto& [t, m] : rep.cesaro) {
    if (t < half) continue;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  rep.tail_oscillation = hi - lo;
  rep.converged = rep.tail_oscillation <= std::max(0.05 * std::abs(rep.mean), 1e-12);
  return rep;
}

SupportEnvelope support_envelope(const Trajectory& trajectory, double start, double tol) {
  const auto& m = trajectory.meta;
  if (!(m.gamma > 0.0)) throw std::invalid_argument("support_envelope: requires gamma > 0");
  if (trajectory.records.empty()) throw std::invalid_argument("support_envelope: empty trajectory");
  SupportEnvelope env;
  env.bound_l1 = m.initial_l1 + m.forcing_l1 / m.gamma;
  env.bound_l2 = m.initial_l2 + m.forcing_l2 / m.gamma;
  env.bound_linf = m.initial_linf + m.forcing_linf / m.gamma;
  env.bound_avg_h12sq = (m.forcing_l2 / m.gamma) * (m.forcing_l2 / m.gamma);
  const double t0 = trajectory.records.front().t;
  const auto decaying = [&](double a, double b, double t) {
    return std::exp(-m.gamma * (t - t0)) * std::max(a - b, 0.0) + b;
  };
  for (const auto& r : trajectory.records) {
    const double l2 = std::sqrt(r.l2sq);
    env.max_h12 = std::max(env.max_h12, std::sqrt(r.h12sq));
    env.max_l1 = std::max(env.max_l1, r.l1);
    if (l2 > env.max_l2) {
      env.max_l2 = l2;
      env.time_of_max_l2 = r.t;
    }
    env.max_linf = std::max(env.max_linf, r.linf);
    env.worst_l2_excess =
        std::max(env.worst_l2_excess, l2 - decaying(m.initial_l2, m.forcing_l2 / m.gamma, r.t));
    env.worst_linf_excess =
        std::max(env.worst_linf_excess, r.linf - decaying(m.initial_linf, m.forcing_linf / m.gamma, r.t));
  }
  env.avg_h12sq = trajectory.records.size() > 1 ? time_average(trajectory, &TrajectoryRecord::h12sq, start)
                                                : trajectory.records.front().h12sq;
  env.violated = env.worst_l2_excess > tol || env.worst_linf_excess > tol || env.max_l1 > env.bound_l1 + tol;
  env.average_violated = env.avg_h12sq > env.bound_avg_h12sq + tol;
  return env;
}

}  // namespace sqglab
