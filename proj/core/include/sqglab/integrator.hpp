#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "sqglab/field.hpp"

namespace sqglab {

enum class Equation { SQG, NSE };

struct SolverConfig {
  Equation equation = Equation::SQG;
  double nu = 0.0;
  double gamma = 0.0;  // SQG only
  double dt = 1e-3;
  double t_end = 1.0;
  GridPtr grid;
  std::optional<SpectralField> scalar_forcing;    // SQG
  std::optional<VelocityField> velocity_forcing;  // NSE
  std::uint64_t seed = 0;
  int sample_stride = 1;
  double cfl_limit = 0.5;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  /// Linear symbol: gamma (1 + |k|) + nu |k|^2 for SQG, nu |k|^2 for NSE.
  double linear_rate(std::size_t idx) const;
};

/// Simulation state plus the time-integrated energy channels. The damping and
/// viscous channels are nondecreasing for gamma, nu >= 0; the injected channel
/// integrates (f, state) and can have either sign.
template <class Field>
struct TimeState {
  double t = 0.0;
  Field field;
  double injected = 0.0;
  double damping = 0.0;
  double viscous = 0.0;
  double residual = 0.0;       // sum over substeps of |balance residual|
  double last_residual = 0.0;  // signed residual of the last step
  long steps = 0;
  long substeps = 0;
  double last_speed = 0.0;

  explicit TimeState(Field f) : field(std::move(f)) {}
};

using SqgState = TimeState<SpectralField>;
using NseState = TimeState<VelocityField>;

/// Raised when the state stops being finite. Carries the time and the last
/// finite state's norms for the abort snapshot.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double t, double last_l2sq)
      : std::runtime_error(what), t_(t), last_l2sq_(last_l2sq) {}
  double time() const { return t_; }
  double last_l2sq() const { return last_l2sq_; }

 private:
  double t_;
  double last_l2sq_;
};

/// One step of size config.dt: Heun on the nonlinear term under the exact
/// integrating factor of the linear part; substeps while the CFL number
/// exceeds config.cfl_limit.
SqgState step_sqg(const SqgState& state, const SolverConfig& config);
NseState step_nse(const NseState& state, const SolverConfig& config);

struct EnergyTerms {
  double l2sq = 0.0;
  double damping = 0.0;  // gamma ||.||_{H^1/2}^2
  double viscous = 0.0;  // nu ||grad .||^2
  double injection = 0.0;
};

EnergyTerms energy_terms(const SpectralField& theta, const SolverConfig& config);
EnergyTerms energy_terms(const VelocityField& u, const SolverConfig& config);

/// Trapezoidal residual of 1/2 d||.||^2/dt + damping + viscous - injection
/// between two consecutive states; the channels of `after` are updated.
double energy_budget(const SqgState& before, SqgState& after, const SolverConfig& config);
double energy_budget(const NseState& before, NseState& after, const SolverConfig& config);

}  // namespace sqglab
