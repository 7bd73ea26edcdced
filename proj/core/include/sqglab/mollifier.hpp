#pragma once

#include <vector>

namespace sqglab {

/// The mollifier kernel j: a radial C-infinity bump exp(-1/(1-|x|^2)) on the unit
/// disk, normalized to unit mass. Even, nonnegative, compactly supported.
namespace mollifier {

/// Unnormalized radial profile.
double bump(double r);

/// Normalized kernel value j(z1, z2).
double kernel(double z1, double z2);

/// Kernel mass of the unnormalized bump, 2*pi*int_0^1 r bump(r) dr.
double bump_mass();

/// Fourier transform jhat(rho) = int j(z) exp(-i xi.z) dz at |xi| = rho.
/// Real, radial, jhat(0) = 1 and |jhat| <= 1.
double transform(double rho);

/// Tensor midpoint quadrature of the kernel on [-1,1]^2 with `points` nodes per
/// axis; weights are renormalized to sum to exactly one.
struct QuadratureNode {
  double z1;
  double z2;
  double weight;
};
std::vector<QuadratureNode> quadrature(int points);

}  // namespace mollifier
}  // namespace sqglab
