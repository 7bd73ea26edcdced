#pragma once

#include "sqglab/field.hpp"

namespace sqglab {

// Fourier-multiplier operators on the periodic torus. All functions return new
// fields and never mutate their arguments.

/// Multiplies coefficient k by |k|^s. For s < 0 the input must be mean-free.
SpectralField lambda_pow(const SpectralField& field, double s);

/// Damping operator I + Lambda.
SpectralField damping(const SpectralField& field);
SpectralField laplacian(const SpectralField& field);
SpectralField derivative(const SpectralField& field, int axis);
VectorField gradient(const SpectralField& field);
/// (-d2 f, d1 f)
VectorField perp_gradient(const SpectralField& field);
SpectralField divergence(const VectorField& v);
/// Scalar vorticity d1 v2 - d2 v1.
SpectralField curl(const VectorField& v);

/// u = R^perp theta = grad^perp Lambda^{-1} theta. Divergence-free and L^2-isometric.
VelocityField riesz_perp(const SpectralField& theta);

/// Orthogonal projection onto divergence-free fields.
VelocityField leray_project(const VectorField& v);

/// Stokes operator A = -P Laplacian on divergence-free fields (multiplier |k|^2).
VelocityField stokes(const VelocityField& u);

/// Velocity of a stream function: grad^perp psi.
VelocityField velocity_from_stream(const SpectralField& psi);

/// Relative divergence sqrt(sum |k.v(k)|^2 / sum |k|^2 |v(k)|^2); 0 for an empty field.
double relative_divergence(const VectorField& v);
/// Largest |k.v(k)| over all modes, absolute.
double max_divergence(const VectorField& v);

/// Convolution with the rescaled bump kernel eps^-2 j(x/eps); identity when eps == 0.
SpectralField mollify(const SpectralField& field, double eps);
VectorField mollify(const VectorField& v, double eps);

// Inner products and norms use the normalized measure (2 pi)^-2 dx.
double inner(const SpectralField& a, const SpectralField& b);
double inner(const VectorField& a, const VectorField& b);

enum class NormKind { L2, Lp, H12, H1 };

/// Dispatching norm. For Lp, p must be >= 1 (infinity allowed); Lp norms are
/// grid quadratures on a grid oversampled by `oversample`.
double norm(const SpectralField& field, NormKind which, double p = 2.0, int oversample = 1);

double l2_norm_sq(const SpectralField& field);
/// sum (1 + |k|) |coeff|^2, equal to (D theta, theta).
double h12_norm_sq(const SpectralField& field);
/// sum |k|^2 |coeff|^2, equal to ||grad theta||^2.
double h1_seminorm_sq(const SpectralField& field);
/// sum |k|^4 |coeff|^2, equal to ||Laplacian theta||^2.
double h2_seminorm_sq(const SpectralField& field);
double lp_norm(const SpectralField& field, double p, int oversample = 1);
double linf_norm(const SpectralField& field, int oversample = 1);

double l2_norm_sq(const VectorField& v);
double h12_norm_sq(const VectorField& v);
double h1_seminorm_sq(const VectorField& v);
double h2_seminorm_sq(const VectorField& v);
/// max over the (oversampled) grid of the Euclidean magnitude.
double linf_norm(const VectorField& v, int oversample = 1);

/// Physical samples on a grid refined by an integer factor (exact interpolation).
PhysicalField sample(const SpectralField& field, int oversample);

/// Pointwise product of two spectral fields, dealiased with the grid's truncation.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

struct CordobaDensity {
  /// D[phi] = 2 phi Lambda phi - Lambda(phi^2), sampled on the doubled grid where
  /// all products of the input's modes are exact.
  PhysicalField density;
  /// Set when more than 1e-8 of the energy lies outside the truncation.
  bool under_resolved = false;
};

CordobaDensity cordoba_density(const SpectralField& phi);

}  // namespace sqglab
