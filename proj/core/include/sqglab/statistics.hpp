#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqglab/diagnostics.hpp"
#include "sqglab/field.hpp"

namespace sqglab {

/// Cylindrical test functional Psi(theta) = psi(y(theta)) with
/// y_k(theta) = (J_eps theta, w_k). Since J_eps is self-adjoint the mollified
/// test fields J_eps w_k are precomputed and y_k = (theta, J_eps w_k).
class CylindricalFunctional {
 public:
  using Profile = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  CylindricalFunctional(double eps, std::vector<SpectralField> tests, Profile psi, Gradient gradient);

  /// psi(y) = 1/2 sum y_k^2 with w_k the cos/sin pairs of the lowest
  /// wavevectors ordered by |k| (count must be even, at most 32).
  static CylindricalFunctional quadratic(const GridPtr& grid, double eps, int count = 16);
  /// The same test fields with a constant profile.
  static CylindricalFunctional constant(const GridPtr& grid, double eps, double value, int count = 16);

  double eps() const { return eps_; }
  std::size_t size() const { return mollified_.size(); }
  const std::vector<SpectralField>& mollified_tests() const { return mollified_; }

  std::vector<double> coordinates(const SpectralField& theta) const;
  double value(const SpectralField& theta) const;
  /// Psi'(theta) = sum_k dpsi/dy_k(y(theta)) J_eps w_k.
  SpectralField derivative(const SpectralField& theta) const;

 private:
  double eps_;
  std::vector<SpectralField> mollified_;
  Profile psi_;
  Gradient gradient_;
};

/// N(theta) = R^perp theta . grad theta + gamma D theta - nu Laplacian theta - f.
SpectralField nonlinear_functional_N(const SpectralField& theta, double nu, double gamma, const SpectralField* forcing);

struct FDecomposition {
  double f1 = 0.0;  // gamma (theta, D Psi') - (f, Psi')
  double f2 = 0.0;  // (theta, -Laplacian Psi')
  double f3 = 0.0;  // -(theta R^perp theta, grad Psi')
  double combined = 0.0;  // f1 + nu f2 + f3
  double direct = 0.0;    // (N(theta), Psi'(theta))
};

FDecomposition decompose_F(const SpectralField& theta, const CylindricalFunctional& functional, double nu, double gamma,
                           const SpectralField* forcing);

struct StationarityReport {
  double horizon = 0.0;
  double residual = 0.0;   // (1/T) int (N, Psi') ds
  double boundary = 0.0;   // (1/T) [Psi(theta(T)) - Psi(theta(0))]
  double defect = 0.0;     // residual + boundary, zero up to time-integration error
  double max_abs_psi = 0.0;
  long samples = 0;
};

/// Online evaluation of the stationarity residual along a trajectory: feed
/// every state in time order, trapezoidal in time.
class StationarityAccumulator {
 public:
  StationarityAccumulator(CylindricalFunctional functional, double nu, double gamma,
                          std::optional<SpectralField> forcing);
  void add(double t, const SpectralField& theta);
  StationarityReport report() const;

 private:
  CylindricalFunctional functional_;
  double nu_;
  double gamma_;
  std::optional<SpectralField> forcing_;
  double t0_ = 0.0, t_ = 0.0;
  double psi0_ = 0.0, psi_ = 0.0;
  double last_ = 0.0;
  double integral_ = 0.0;
  double max_abs_psi_ = 0.0;
  long count_ = 0;
};

StationarityReport stationarity_residual(const std::vector<double>& times, const std::vector<SpectralField>& states,
                                         const CylindricalFunctional& functional, double nu, double gamma,
                                         const SpectralField* forcing);

/// Sampled states with uniform weights: the finite-time stand-in for the
/// time-average measure.
class EmpiricalMeasure {
 public:
  void add(SpectralField state) { states_.push_back(std::move(state)); }
  std::size_t size() const { return states_.size(); }
  const std::vector<SpectralField>& states() const { return states_; }
  std::vector<double> weights() const;
  /// Sample mean of an observable; exact for constant observables.
  double integrate(const std::function<double(const SpectralField&)>& observable) const;

 private:
  std::vector<SpectralField> states_;
};

struct ShellCondition {
  double value = 0.0;  // mean over all window samples of 1_shell * (gamma H^1/2 + nu grad^2 - (f, theta))
  long in_shell = 0;
  long samples = 0;
  bool empty = true;
};

/// Condition (c) localized to E1 <= ||theta||_{H^1/2} <= E2 over samples with t >= window_start.
ShellCondition energy_condition_c(const Trajectory& trajectory, double e1, double e2, double window_start);

struct BalanceDefect {
  double defect = 0.0;        // avg[gamma ||theta||^2_{H^1/2} - (f, theta)]
  double viscous = 0.0;       // nu avg ||grad theta||^2
  double drift = 0.0;         // (||theta(T)||^2 - ||theta(T0)||^2) / (2 (T - T0))
  double identity_gap = 0.0;  // defect + viscous + drift, zero up to time-integration error
};

BalanceDefect dissipation_balance_defect(const Trajectory& trajectory, double window_start);

/// Finite-eps terms of the energy-balance limit for one state:
///   I = (J theta, J(gamma D theta - f)),
///   K = (J theta, J(R^perp theta . grad theta)) and its flux form (J theta, div rho_eps),
///   V = nu (J theta, J(-Laplacian theta)).
struct IKTerms {
  double i = 0.0;
  double k_direct = 0.0;
  double k_flux = 0.0;
  double v = 0.0;
};

IKTerms ik_terms(const SpectralField& theta, double eps, double nu, double gamma, const SpectralField* forcing);

/// Machine-readable check report.
struct CheckReport {
  std::string check;
  std::string window;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string to_json() const;
};

}  // namespace sqglab
