#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sqglab/integrator.hpp"

namespace sqglab {

/// Diagnostics of one sample. delta and mu are NSE-only:
///   delta = ||grad u||^2 - lambda ||u||^2,  mu = ||grad u||^2 / ||u||^2.
struct TrajectoryRecord {
  double t = 0.0;
  double l2sq = 0.0;
  double h12sq = 0.0;
  double gradsq = 0.0;
  double linf = 0.0;
  double l1 = 0.0;
  double inject = 0.0;    // (f, state)
  double residual = 0.0;  // signed energy-balance residual of the step that ended here
  std::optional<double> delta;
  std::optional<double> mu;
};

/// Quantities fixed for a whole run, needed by the envelope and balance checks.
struct TrajectoryMeta {
  Equation equation = Equation::SQG;
  double nu = 0.0;
  double gamma = 0.0;
  double dt = 0.0;
  double lambda = 0.0;  // NSE forcing eigenvalue, 0 if unknown
  double forcing_l1 = 0.0;
  double forcing_l2 = 0.0;
  double forcing_linf = 0.0;
  double initial_l1 = 0.0;
  double initial_l2 = 0.0;
  double initial_linf = 0.0;
  int oversample = 1;
};

/// Time-integrated channels at the end of the run.
struct TrajectoryTotals {
  double injected = 0.0;
  double damping = 0.0;
  double viscous = 0.0;
  double residual = 0.0;  // sum of |per-step residual|
  long steps = 0;
  long substeps = 0;
};

struct Trajectory {
  TrajectoryMeta meta;
  std::vector<TrajectoryRecord> records;
  TrajectoryTotals totals;

  std::vector<double> times() const;
  std::vector<double> series(double TrajectoryRecord::*member) const;
};

TrajectoryRecord make_record(const SqgState& state, const SolverConfig& config, int oversample = 1);
TrajectoryRecord make_record(const NseState& state, const SolverConfig& config, double lambda, int oversample = 1);

struct SimulationOptions {
  int oversample = 1;  // L^p sampling refinement
  double lambda = 0.0;  // NSE: eigenvalue used for delta
  /// Called after every completed step (and once for the initial state).
  std::function<void(const SqgState&)> on_sqg_step;
  std::function<void(const NseState&)> on_nse_step;
};

struct SqgRun {
  Trajectory trajectory;
  SqgState final_state;
};

struct NseRun {
  Trajectory trajectory;
  NseState final_state;
};

/// Advances round(t_end / dt) steps, recording every sample_stride steps plus
/// the initial and final states. Throws NumericalFailure on blow-up.
SqgRun simulate_sqg(const SolverConfig& config, SpectralField initial, const SimulationOptions& options = {});
NseRun simulate_nse(const SolverConfig& config, VelocityField initial, const SimulationOptions& options = {});

/// Weighted running mean and variance with trapezoidal time weights. A constant
/// series has mean exactly equal to the constant.
class TimeAverage {
 public:
  explicit TimeAverage(double window_start = 0.0) : start_(window_start) {}
  void add(double t, double value);
  double mean() const { return mean_; }
  double variance() const { return weight_ > 0.0 ? m2_ / weight_ : 0.0; }
  double horizon() const { return last_t_ - start_; }
  double window_start() const { return start_; }
  long samples() const { return count_; }
  /// (t, running mean) after every accepted sample past the first.
  const std::vector<std::pair<double, double>>& cesaro() const { return curve_; }

 private:
  void accumulate(double w, double x);

  double start_;
  double last_t_ = 0.0;
  double last_value_ = 0.0;
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  long count_ = 0;
  std::vector<std::pair<double, double>> curve_;
};

struct EpsilonEstimate {
  double value = 0.0;          // nu * time average of ||grad||^2 over [window_start, T]
  double limsup_proxy = 0.0;   // max of trailing Cesaro means over the final half
  double window_start = 0.0;
  double horizon = 0.0;
};

/// Throws std::invalid_argument if fewer than two samples fall in the window.
EpsilonEstimate epsilon_estimate(const Trajectory& trajectory, double nu, double window_start);
/// Window start at discard_fraction of the recorded span.
double window_start(const Trajectory& trajectory, double discard_fraction);

/// Trapezoidal time average of a recorded series over [window_start, T].
double time_average(const Trajectory& trajectory, double TrajectoryRecord::*member, double window_start);

struct ConvergenceReport {
  std::vector<std::pair<double, double>> cesaro;
  double mean = 0.0;
  double tail_oscillation = 0.0;  // max - min of the Cesaro curve over its final half
  bool converged = false;         // oscillation <= 5% of |mean| (or <= 1e-12 absolutely)
};

/// Throws std::invalid_argument for fewer than 10 samples or mismatched sizes.
ConvergenceReport average_convergence(const std::vector<double>& times, const std::vector<double>& values);

struct SupportEnvelope {
  double max_h12 = 0.0;
  double max_l1 = 0.0;
  double max_l2 = 0.0;
  double max_linf = 0.0;
  double time_of_max_l2 = 0.0;
  double bound_l1 = 0.0;  // A_p = ||theta0||_p + ||f||_p / gamma
  double bound_l2 = 0.0;
  double bound_linf = 0.0;
  double avg_h12sq = 0.0;          // over the averaging window
  double bound_avg_h12sq = 0.0;    // ||f||^2 / gamma^2
  double worst_l2_excess = 0.0;    // max over samples of ||theta(t)||_2 minus its decaying envelope
  double worst_linf_excess = 0.0;
  bool violated = false;          // pointwise-in-time envelopes
  bool average_violated = false;  // time-averaged H^{1/2} bound; meaningful on converged windows only
};

/// Envelopes of the L^p maximum principle, pointwise in time:
///   ||theta(t)||_p <= e^{-gamma t}(||theta0||_p - ||f||_p/gamma)_+ + ||f||_p/gamma
/// and the time-averaged H^{1/2} bound. Requires gamma > 0.
SupportEnvelope support_envelope(const Trajectory& trajectory, double window_start = 0.0, double tol = 1e-6);

}  // namespace sqglab
