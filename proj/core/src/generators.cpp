#include "sqglab/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sqglab/operators.hpp"

namespace sqglab {

namespace {

// One representative per conjugate pair: k2 > 0, or k2 == 0 with k1 > 0.
template <class Visit>
void for_half_plane(const Grid& g, double max_k, Visit&& visit) {
  const int reach = static_cast<int>(std::floor(max_k));
  for (int k1 = -reach; k1 <= reach; ++k1) {
    for (int k2 = 0; k2 <= reach; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      const double mag = std::hypot(k1, k2);
      if (mag > max_k) continue;
      if (std::abs(k1) >= g.n() / 2 || k2 >= g.n() / 2) continue;
      visit(k1, k2, mag);
    }
  }
}

}  // namespace

SpectralField random_field(const GridPtr& grid, std::uint64_t seed, double max_k, double slope) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralField out(grid);
  for_half_plane(*grid, max_k, [&](int k1, int k2, double mag) {
    const double a = normal(rng) * std::pow(mag, slope);
    out.set_mode(k1, k2, std::polar(a, phase(rng)));
  });
  out.truncate();
  return out;
}

SpectralField default_sqg_forcing(const GridPtr& grid, std::uint64_t seed, double max_shell) {
  auto f = random_field(grid, seed, max_shell, -1.0);
  const double norm = std::sqrt(l2_norm_sq(f));
  if (norm == 0.0) throw std::invalid_argument("default_sqg_forcing: no modes on the requested shells");
  return (1.0 / norm) * f;
}

VelocityField random_velocity(const GridPtr& grid, std::uint64_t seed, double max_k, double slope) {
  return velocity_from_stream(random_field(grid, seed, max_k, slope - 1.0));
}

SpectralField rough_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralField out(grid);
  for_half_plane(*grid, grid->n(), [&](int k1, int k2, double mag) {
    out.set_mode(k1, k2, std::polar(std::pow(mag, -1.5), phase(rng)));
  });
  out.truncate();
  return (1.0 / out.to_physical().max_abs()) * out;
}

SpectralField wave_field(const GridPtr& grid, const std::vector<Wave>& waves) {
  SpectralField out(grid);
  for (const auto& w : waves) out.add_wave(w.k1, w.k2, w.cos_amplitude, w.sin_amplitude);
  return out;
}

VelocityField shear_velocity(const GridPtr& grid, int k, double amplitude) {
  if (k < 1) throw std::invalid_argument("shear_velocity: wavenumber must be >= 1");
  SpectralField c1(grid);
  c1.add_wave(0, k, 0.0, std::sqrt(2.0) * amplitude);
  return VelocityField::checked({std::move(c1), SpectralField(grid)});
}

}  // namespace sqglab
