#pragma once

#include "sqglab/field.hpp"

namespace sqglab {

/// B(u, v) = P(u . grad v), pseudo-spectral with the grid's dealiasing truncation.
/// Throws std::invalid_argument if u or v is not divergence-free.
VelocityField nse_bilinear(const VelocityField& u, const VelocityField& v);

struct AdvectionResult {
  VelocityField term;
  double max_speed = 0.0;
};

/// B(u, u) through the rotational form P(omega u^perp); five transforms instead of eight.
AdvectionResult nse_self_advection(const VelocityField& u);

/// ||AB(u,u) - B(u,Au) + B(Au,u)|| divided by the sum of the three term norms
/// (0 when all three vanish relative to ||grad u|| ||A u||).
double stokes_identity_residual(const VelocityField& u);

struct TransportResult {
  SpectralField term;
  double max_speed = 0.0;
};

/// u . grad theta with u = R^perp theta, dealiased. Mean-free by construction.
SpectralField sqg_transport(const SpectralField& theta);
TransportResult sqg_transport_with_speed(const SpectralField& theta);

/// Commutator C_phi(theta) = Lambda(grad phi . R^perp theta) - grad phi . Lambda(R^perp theta).
SpectralField commutator(const SpectralField& phi, const SpectralField& theta);

struct CommutatorIdentity {
  double flux_side = 0.0;        // (theta R^perp theta, grad phi)
  double commutator_side = 0.0;  // (1/2)(Lambda^{-1} theta, C_phi(theta))
  double residual = 0.0;         // |flux_side - commutator_side|
};

CommutatorIdentity commutator_identity(const SpectralField& phi, const SpectralField& theta);
double commutator_identity_residual(const SpectralField& phi, const SpectralField& theta);

/// rho_eps(u, theta) = J(u theta) - J(u) J(theta) with u = R^perp theta, sampled on
/// the doubled grid where the product u*theta is exact. Zero for eps == 0.
PhysicalVector flux_rho(const SpectralField& theta, double eps);
/// L^2 norm of flux_rho over both components.
double flux_rho_norm(const SpectralField& theta, double eps);

/// ||rho_eps - r_eps + (u - J u)(theta - J theta)||_{L^2} where r_eps is the
/// double-increment integral int j(z) delta_{eps z} u delta_{eps z} theta dz evaluated
/// with `points` midpoint nodes per axis on the kernel support.
double flux_identity_residual(const SpectralField& theta, double eps, int points = 64);

/// ||delta_{eps z} theta||_{L^2}, the increment theta(x - eps z) - theta(x), by exact shift.
double increment_norm(const SpectralField& theta, double shift1, double shift2);

/// Two-eigenfunction steady Euler construction: psi1 = a1 sin(k1 x1) + b1 cos(k1 x1),
/// psi2 = a2 sin(k2 x2) + b2 cos(k2 x2), u = grad^perp(psi1 + psi2), f = B(u, u).
struct KolmogorovSpec {
  int k1 = 1;
  int k2 = 2;
  double alpha1 = 1.0;
  double beta1 = 0.0;
  double alpha2 = 1.0;
  double beta2 = 0.0;
};

struct KolmogorovForce {
  VelocityField f;
  VelocityField u;  // the Euler solution with B(u,u) = f
  double lambda = 0.0;
  double eigen_residual = 0.0;  // ||A f - lambda f|| / ||f||, 0 if degenerate
  bool degenerate = false;      // f vanishes (single-shell u)
};

KolmogorovForce kolmogorov_force(const GridPtr& grid, const KolmogorovSpec& spec);

}  // namespace sqglab
