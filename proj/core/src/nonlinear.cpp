#include "sqglab/nonlinear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sqglab/operators.hpp"

namespace sqglab {

namespace {

void require_divergence_free(const VelocityField& v, const char* name) {
  const double rel = relative_divergence(v);
  if (!(rel <= 1e-10)) {
    throw std::invalid_argument(std::string("nse_bilinear: argument ") + name +
                                " is not divergence-free (relative divergence " + std::to_string(rel) + ")");
  }
}

SpectralField truncated_transform(const PhysicalField& values) {
  auto out = SpectralField::from_physical(values);
  out.truncate();
  return out;
}

}  // namespace

VelocityField nse_bilinear(const VelocityField& u, const VelocityField& v) {
  require_divergence_free(u, "u");
  require_divergence_free(v, "v");
  const auto grid = u.grid_ptr();
  const auto u1 = u.c1.to_physical();
  const auto u2 = u.c2.to_physical();
  const auto d1v1 = derivative(v.c1, 0).to_physical();
  const auto d2v1 = derivative(v.c1, 1).to_physical();
  const auto d1v2 = derivative(v.c2, 0).to_physical();
  const auto d2v2 = derivative(v.c2, 1).to_physical();
  PhysicalField w1(grid);
  PhysicalField w2(grid);
  for (std::size_t i = 0; i < w1.values.size(); ++i) {
    w1.values[i] = u1.values[i] * d1v1.values[i] + u2.values[i] * d2v1.values[i];
    w2.values[i] = u1.values[i] * d1v2.values[i] + u2.values[i] * d2v2.values[i];
  }
  return leray_project({truncated_transform(w1), truncated_transform(w2)});
}

AdvectionResult nse_self_advection(const VelocityField& u) {
  const auto grid = u.grid_ptr();
  const auto u1 = u.c1.to_physical();
  const auto u2 = u.c2.to_physical();
  const auto omega = curl(u).to_physical();
  PhysicalField w1(grid);
  PhysicalField w2(grid);
  double speed_sq = 0.0;
  for (std::size_t i = 0; i < w1.values.size(); ++i) {
    // u.grad u = grad(|u|^2/2) + omega u^perp; the gradient is removed by P.
    w1.values[i] = -omega.values[i] * u2.values[i];
    w2.values[i] = omega.values[i] * u1.values[i];
    speed_sq = std::max(speed_sq, u1.values[i] * u1.values[i] + u2.values[i] * u2.values[i]);
  }
  return {leray_project({truncated_transform(w1), truncated_transform(w2)}), std::sqrt(speed_sq)};
}

double stokes_identity_residual(const VelocityField& u) {
  const auto au = stokes(u);
  const auto lhs = stokes(nse_bilinear(u, u));
  const auto b1 = nse_bilinear(u, au);
  const auto b2 = nse_bilinear(au, u);
  const double scale =
      std::sqrt(l2_norm_sq(lhs)) + std::sqrt(l2_norm_sq(b1)) + std::sqrt(l2_norm_sq(b2));
  // Single-shell fields make every term vanish up to roundoff.
  const double natural = std::sqrt(h1_seminorm_sq(u) * h2_seminorm_sq(u));
  if (scale <= 1e-13 * natural) return 0.0;
  VectorField diff = lhs;
  diff -= b1;
  diff += b2;
  return std::sqrt(l2_norm_sq(diff)) / scale;
}

TransportResult sqg_transport_with_speed(const SpectralField& theta) {
  const auto grid = theta.grid_ptr();
  const auto u = riesz_perp(theta);
  const auto u1 = u.c1.to_physical();
  const auto u2 = u.c2.to_physical();
  const auto t1 = derivative(theta, 0).to_physical();
  const auto t2 = derivative(theta, 1).to_physical();
  PhysicalField w(grid);
  double speed_sq = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = u1.values[i] * t1.values[i] + u2.values[i] * t2.values[i];
    speed_sq = std::max(speed_sq, u1.values[i] * u1.values[i] + u2.values[i] * u2.values[i]);
  }
  auto term = truncated_transform(w);
  term.remove_mean();
  return {std::move(term), std::sqrt(speed_sq)};
}

SpectralField sqg_transport(const SpectralField& theta) { return sqg_transport_with_speed(theta).term; }

SpectralField commutator(const SpectralField& phi, const SpectralField& theta) {
  const auto grid = theta.grid_ptr();
  const auto g1 = derivative(phi, 0).to_physical();
  const auto g2 = derivative(phi, 1).to_physical();
  const auto u = riesz_perp(theta);
  const auto u1 = u.c1.to_physical();
  const auto u2 = u.c2.to_physical();
  const auto lu1 = lambda_pow(u.c1, 1.0).to_physical();
  const auto lu2 = lambda_pow(u.c2, 1.0).to_physical();
  PhysicalField dot(grid);
  PhysicalField dot_lambda(grid);
  for (std::size_t i = 0; i < dot.values.size(); ++i) {
    dot.values[i] = g1.values[i] * u1.values[i] + g2.values[i] * u2.values[i];
    dot_lambda.values[i] = g1.values[i] * lu1.values[i] + g2.values[i] * lu2.values[i];
  }
  return lambda_pow(truncated_transform(dot), 1.0) - truncated_transform(dot_lambda);
}

CommutatorIdentity commutator_identity(const SpectralField& phi, const SpectralField& theta) {
  const auto grid = theta.grid_ptr();
  const auto u = riesz_perp(theta);
  const auto t = theta.to_physical();
  const auto u1 = u.c1.to_physical();
  const auto u2 = u.c2.to_physical();
  PhysicalField f1(grid);
  PhysicalField f2(grid);
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    f1.values[i] = t.values[i] * u1.values[i];
    f2.values[i] = t.values[i] * u2.values[i];
  }
  CommutatorIdentity out;
  out.flux_side = inner(truncated_transform(f1), derivative(phi, 0)) +
                  inner(truncated_transform(f2), derivative(phi, 1));
  out.commutator_side = 0.5 * inner(lambda_pow(theta, -1.0), commutator(phi, theta));
  out.residual = std::abs(out.flux_side - out.commutator_side);
  return out;
}

double commutator_identity_residual(const SpectralField& phi, const SpectralField& theta) {
  return commutator_identity(phi, theta).residual;
}

KolmogorovForce kolmogorov_force(const GridPtr& grid, const KolmogorovSpec& spec) {
  if (spec.k1 < 1 || spec.k2 < 1 || spec.k1 == spec.k2) {
    throw std::invalid_argument("kolmogorov_force: need distinct wavenumbers k1, k2 >= 1");
  }
  if (std::max(spec.k1, spec.k2) > grid->cutoff()) {
    throw std::invalid_argument("kolmogorov_force: wavenumbers exceed the grid's dealiasing cutoff");
  }
  SpectralField psi(grid);
  psi.add_wave(spec.k1, 0, spec.beta1, spec.alpha1);
  psi.add_wave(0, spec.k2, spec.beta2, spec.alpha2);
  auto u = velocity_from_stream(psi);
  auto f = nse_bilinear(u, u);
  KolmogorovForce out{f, u, static_cast<double>(spec.k1 * spec.k1 + spec.k2 * spec.k2), 0.0, false};
  const double fnorm = std::sqrt(l2_norm_sq(f));
  const double scale = std::sqrt(h1_seminorm_sq(u) * l2_norm_sq(u));
  out.degenerate = !(fnorm > 1e-12 * scale);
  if (!out.degenerate) {
    VectorField diff = stokes(f);
    diff -= out.lambda * f;
    out.eigen_residual = std::sqrt(l2_norm_sq(diff)) / fnorm;
  }
  return out;
}

}  // namespace sqglab
