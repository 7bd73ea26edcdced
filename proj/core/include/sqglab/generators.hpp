#pragma once

#include <cstdint>
#include <vector>

#include "sqglab/field.hpp"

namespace sqglab {

/// Seeded smooth forcing on shells 1 <= |k| <= max_shell with unit L^2 norm.
SpectralField default_sqg_forcing(const GridPtr& grid, std::uint64_t seed, double max_shell = 4.0);

/// Mean-free random field on 1 <= |k| <= max_k, coefficient modulus |k|^slope
/// times a standard normal, uniform phase. slope = 0 gives flat band-limited noise.
SpectralField random_field(const GridPtr& grid, std::uint64_t seed, double max_k, double slope = 0.0);

/// Divergence-free random velocity: grad^perp of a random stream function.
VelocityField random_velocity(const GridPtr& grid, std::uint64_t seed, double max_k, double slope = -1.0);

/// Modulus |k|^-3/2 on every retained mode with uniform random phases, scaled
/// to unit L^infinity on the grid.
SpectralField rough_field(const GridPtr& grid, std::uint64_t seed);

/// Sum of amp_c cos(k.x) + amp_s sin(k.x) terms.
struct Wave {
  int k1 = 0;
  int k2 = 0;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
};
SpectralField wave_field(const GridPtr& grid, const std::vector<Wave>& waves);

/// Shear velocity (sqrt(2) amplitude sin(k x2), 0); unit L^2 at amplitude 1,
/// Stokes eigenfunction with eigenvalue k^2.
VelocityField shear_velocity(const GridPtr& grid, int k, double amplitude = 1.0);

}  // namespace sqglab
