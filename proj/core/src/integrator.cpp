#include "sqglab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

namespace sqglab {

void SolverConfig::validate() const {
  if (!grid) throw std::invalid_argument("solver config: grid missing");
  if (!(nu >= 0.0)) throw std::invalid_argument("solver config: nu must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("solver config: gamma must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("solver config: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("solver config: t_end must be >= 0");
  if (sample_stride < 1) throw std::invalid_argument("solver config: sample_stride must be >= 1");
  if (!(cfl_limit > 0.0)) throw std::invalid_argument("solver config: cfl_limit must be > 0");
  if (equation == Equation::SQG) {
    if (velocity_forcing) throw std::invalid_argument("solver config: SQG takes a scalar forcing");
    if (scalar_forcing) {
      if (scalar_forcing->grid_ptr() != grid) throw std::invalid_argument("solver config: forcing grid mismatch");
      const double scale = std::sqrt(l2_norm_sq(*scalar_forcing));
      if (std::abs(scalar_forcing->mean()) > 1e-12 * std::max(scale, 1e-300)) {
        throw std::invalid_argument("solver config: forcing must be mean-free");
      }
    }
  } else {
    if (scalar_forcing) throw std::invalid_argument("solver config: NSE takes a velocity forcing");
    if (gamma != 0.0) throw std::invalid_argument("solver config: gamma applies to SQG only");
    if (velocity_forcing && velocity_forcing->grid_ptr() != grid) {
      throw std::invalid_argument("solver config: forcing grid mismatch");
    }
  }
}

double SolverConfig::linear_rate(std::size_t idx) const {
  const double ksq = grid->k_squared(idx);
  const double visc = nu * ksq;
  if (equation == Equation::NSE) return visc;
  return gamma * (1.0 + grid->k_magnitude(idx)) + visc;
}

namespace {

struct Factors {
  std::vector<double> decay;  // exp(-L h)
  std::vector<double> phi;    // (1 - exp(-L h)) / L, h where L = 0
};

const Factors& factors(const SolverConfig& c, double h) {
  struct Cache {
    const Grid* grid = nullptr;
    Equation equation = Equation::SQG;
    double nu = -1.0, gamma = -1.0, h = -1.0;
    Factors f;
  };
  thread_local Cache cache;
  if (cache.grid == c.grid.get() && cache.equation == c.equation && cache.nu == c.nu &&
      cache.gamma == c.gamma && cache.h == h) {
    return cache.f;
  }
  const std::size_t size = c.grid->spectral_size();
  cache.f.decay.resize(size);
  cache.f.phi.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double L = c.linear_rate(i);
    cache.f.decay[i] = std::exp(-L * h);
    cache.f.phi[i] = L == 0.0 ? h : -std::expm1(-L * h) / L;
  }
  cache.grid = c.grid.get();
  cache.equation = c.equation;
  cache.nu = c.nu;
  cache.gamma = c.gamma;
  cache.h = h;
  return cache.f;
}

// Field-type adapters so that one Heun loop serves both equations.
struct ScalarOps {
  using Field = SpectralField;
  static std::pair<Field, double> minus_nonlinear(const Field& theta) {
    auto r = sqg_transport_with_speed(theta);
    return {-r.term, r.max_speed};
  }
  // decay * (a + wb b) + wc c + phi f
  static Field combine(const Factors& fx, const Field& a, const Field& b, double wb, const Field* c, double wc,
                       const Field* f) {
    Field out(a.grid_ptr());
    for (std::size_t i = 0; i < fx.decay.size(); ++i) {
      Complex v = fx.decay[i] * (a[i] + wb * b[i]);
      if (c) v += wc * (*c)[i];
      if (f) v += fx.phi[i] * (*f)[i];
      out[i] = v;
    }
    return out;
  }
  static const Field* forcing(const SolverConfig& c) { return c.scalar_forcing ? &*c.scalar_forcing : nullptr; }
  static bool finite(const Field& f) { return f.all_finite(); }
  static double l2sq(const Field& f) { return l2_norm_sq(f); }
};

struct VectorOps {
  using Field = VelocityField;
  static std::pair<Field, double> minus_nonlinear(const Field& u) {
    auto r = nse_self_advection(u);
    r.term *= -1.0;
    return {std::move(r.term), r.max_speed};
  }
  static Field combine(const Factors& fx, const Field& a, const Field& b, double wb, const Field* c, double wc,
                       const Field* f) {
    auto c1 = ScalarOps::combine(fx, a.c1, b.c1, wb, c ? &c->c1 : nullptr, wc, f ? &f->c1 : nullptr);
    auto c2 = ScalarOps::combine(fx, a.c2, b.c2, wb, c ? &c->c2 : nullptr, wc, f ? &f->c2 : nullptr);
    return VelocityField::trusted({std::move(c1), std::move(c2)});
  }
  static const Field* forcing(const SolverConfig& c) {
    return c.velocity_forcing ? &*c.velocity_forcing : nullptr;
  }
  static bool finite(const Field& f) { return f.c1.all_finite() && f.c2.all_finite(); }
  static double l2sq(const Field& f) { return l2_norm_sq(f); }
};

template <class Ops>
TimeState<typename Ops::Field> advance(const TimeState<typename Ops::Field>& start, const SolverConfig& c) {
  using Field = typename Ops::Field;
  const Field* f = Ops::forcing(c);
  auto [n0, speed] = Ops::minus_nonlinear(start.field);
  if (!std::isfinite(speed)) {
    throw NumericalFailure("nonfinite velocity at t = " + std::to_string(start.t), start.t, Ops::l2sq(start.field));
  }
  const double cfl = c.dt * speed * c.grid->n() / (2.0 * std::numbers::pi);
  const long count = std::max(1L, static_cast<long>(std::ceil(cfl / c.cfl_limit - 1e-12)));
  const double h = c.dt / static_cast<double>(count);
  const Factors& fx = factors(c, h);

  TimeState<Field> current = start;
  for (long s = 0; s < count; ++s) {
    if (s > 0) std::tie(n0, speed) = Ops::minus_nonlinear(current.field);
    const Field predictor = Ops::combine(fx, current.field, n0, h, nullptr, 0.0, f);
    const auto n1 = Ops::minus_nonlinear(predictor).first;
    TimeState<Field> next = current;
    next.field = Ops::combine(fx, current.field, n0, 0.5 * h, &n1, 0.5 * h, f);
    next.t = start.t + c.dt * static_cast<double>(s + 1) / static_cast<double>(count);
    next.substeps = current.substeps + 1;
    next.last_speed = speed;
    if (!Ops::finite(next.field)) {
      throw NumericalFailure("nonfinite state at t = " + std::to_string(next.t), current.t,
                             Ops::l2sq(current.field));
    }
    energy_budget(current, next, c);
    current = std::move(next);
  }
  current.steps = start.steps + 1;
  current.last_residual = current.residual - start.residual;
  return current;
}

template <class Field>
double budget(const TimeState<Field>& before, TimeState<Field>& after, const SolverConfig& c) {
  const double h = after.t - before.t;
  const auto a = energy_terms(before.field, c);
  const auto b = energy_terms(after.field, c);
  after.injected = before.injected + 0.5 * h * (a.injection + b.injection);
  after.damping = before.damping + 0.5 * h * (a.damping + b.damping);
  after.viscous = before.viscous + 0.5 * h * (a.viscous + b.viscous);
  const double r = 0.5 * (b.l2sq - a.l2sq) +
                   0.5 * h * ((a.damping + a.viscous - a.injection) + (b.damping + b.viscous - b.injection));
  after.residual = before.residual + std::abs(r);
  return r;
}

}  // namespace

EnergyTerms energy_terms(const SpectralField& theta, const SolverConfig& c) {
  EnergyTerms e;
  e.l2sq = l2_norm_sq(theta);
  e.damping = c.gamma == 0.0 ? 0.0 : c.gamma * h12_norm_sq(theta);
  e.viscous = c.nu == 0.0 ? 0.0 : c.nu * h1_seminorm_sq(theta);
  e.injection = c.scalar_forcing ? inner(*c.scalar_forcing, theta) : 0.0;
  return e;
}

EnergyTerms energy_terms(const VelocityField& u, const SolverConfig& c) {
  EnergyTerms e;
  e.l2sq = l2_norm_sq(u);
  e.viscous = c.nu == 0.0 ? 0.0 : c.nu * h1_seminorm_sq(u);
  e.injection = c.velocity_forcing ? inner(*c.velocity_forcing, u) : 0.0;
  return e;
}

double energy_budget(const SqgState& before, SqgState& after, const SolverConfig& config) {
  return budget(before, after, config);
}

double energy_budget(const NseState& before, NseState& after, const SolverConfig& config) {
  return budget(before, after, config);
}

SqgState step_sqg(const SqgState& state, const SolverConfig& config) {
  if (config.equation != Equation::SQG) throw std::invalid_argument("step_sqg: config is not SQG");
  return advance<ScalarOps>(state, config);
}

NseState step_nse(const NseState& state, const SolverConfig& config) {
  if (config.equation != Equation::NSE) throw std::invalid_argument("step_nse: config is not NSE");
  return advance<VectorOps>(state, config);
}

}  // namespace sqglab
