#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqglab/diagnostics.hpp"
#include "sqglab/field.hpp"
#include "sqglab/integrator.hpp"

namespace sqglab {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y). Throws std::invalid_argument for
/// fewer than two points or nonpositive data.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepEntry {
  double nu = 0.0;
  double epsilon = 0.0;
  double limsup = 0.0;
  double window_start = 0.0;
  double horizon = 0.0;
  bool converged = false;
  bool excluded = false;
  std::string reason;
  // SQG
  double defect = 0.0;         // dissipation balance defect
  double avg_h12sq = 0.0;
  double support_bound = 0.0;  // ||f||^2 / gamma^2
  // Kolmogorov
  std::optional<double> predicted;       // ||f||^2 / (nu lambda)
  std::optional<double> relative_error;  // |epsilon / predicted - 1|
  double max_steady_residual = 0.0;      // max_t ||u - u_f|| / ||u_f||
  std::optional<double> departure_time;
};

struct SweepResult {
  std::string kind;  // "sqg" or "kolmogorov"
  std::vector<SweepEntry> entries;
  std::vector<Trajectory> trajectories;  // parallel to entries; empty for failed runs

  // Trend statistics over included entries, in sweep order.
  bool epsilon_strictly_decreasing = false;
  std::optional<double> last_over_first;  // epsilon(last nu) / epsilon(first nu)
  bool defect_magnitude_decreasing = false;
  std::optional<double> exponent;  // fitted slope of log epsilon vs log nu
  std::size_t included() const;

  std::string to_json() const;
};

struct SqgSweepSpec {
  SolverConfig base;  // nu is overwritten per run
  std::optional<SpectralField> initial;  // zero state if absent
  std::vector<double> nus;               // strictly decreasing
  double discard_fraction = 0.2;
  int oversample = 1;
  int jobs = 1;
};

/// One run per nu; epsilon, balance defect and convergence verdicts of the
/// gradient series on the trailing window. Non-converged or failed runs are
/// marked excluded and kept in the report.
SweepResult sqg_nu_sweep(const SqgSweepSpec& spec);

struct KolmogorovSweepSpec {
  SolverConfig base;  // NSE; velocity_forcing must be set
  double lambda = 0.0;  // A f = lambda f
  std::vector<double> nus;
  double discard_fraction = 0.2;
  double steady_tol = 1e-8;
  double law_tol = 1e-6;
  int jobs = 1;
};

/// u_f = f / (nu lambda), the steady state of the forced NSE for an eigenforce.
VelocityField kolmogorov_steady_state(const VelocityField& f, double nu, double lambda);

/// Runs from u_f for each nu and compares epsilon with ||f||^2 / (nu lambda).
/// A run whose distance to u_f reaches steady_tol records the departure time
/// and is excluded from the exact law; the exponent fit uses every finished run.
SweepResult kolmogorov_divergence(const KolmogorovSweepSpec& spec);

struct DeltaDecayReport {
  std::vector<double> t;
  std::vector<double> delta;
  std::vector<double> mu;
  std::vector<double> bound;  // delta(0) exp(-2 nu int_0^t mu)
  double delta0 = 0.0;
  double max_excess_plus = 0.0;      // max_t delta(t) - max(delta(0), 0)
  double max_excess_envelope = 0.0;  // max_t delta(t) - bound(t); 0 when delta(0) <= 0
  bool pass = false;
};

/// delta(t) = ||grad u||^2 - lambda ||u||^2 and mu(t) at every step of an NSE
/// run with eigenforce f (A f = lambda f), checked against delta_+(0) and the
/// exponential envelope.
DeltaDecayReport delta_decay_study(const SolverConfig& config, const VelocityField& u0, double lambda,
                                   double tol_plus = 1e-8, double tol_envelope = 1e-6);

struct FluxScalingEntry {
  std::vector<double> eps;  // points kept (eps >= 2 grid spacings)
  std::vector<double> rho_norm;
  std::vector<double> increment_norm;
  double rho_slope = 0.0;
  double increment_slope = 0.0;
  /// max over eps of ||delta_{eps z} theta|| / ((eps |z|)^{1/2} ||theta||_{H^1/2});
  /// the Fourier bound gives at most sqrt(2).
  double increment_constant = 0.0;
};

struct FluxScalingReport {
  std::vector<FluxScalingEntry> fields;
  std::vector<double> excluded_eps;
  double median_rho_slope = 0.0;
  double median_increment_slope = 0.0;
};

FluxScalingReport flux_scaling_study(const std::vector<SpectralField>& fields, const std::vector<double>& eps,
                                     double z1 = 1.0, double z2 = 0.0);

}  // namespace sqglab
