#include <cmath>
#include <stdexcept>
#include <vector>

#include "sqglab/mollifier.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

namespace sqglab {

namespace {

// Products of two truncated fields on the doubled grid are exact, so the flux
// terms there carry no aliasing error.
GridPtr doubled(const Grid& g) { return Grid::make(2 * g.n(), g.dealias_fraction()); }

SpectralField shifted(const SpectralField& field, double s1, double s2) {
  const Grid& g = field.grid();
  SpectralField out(field.grid_ptr());
  std::vector<Complex> row_phase(g.n());
  std::vector<Complex> col_phase(g.half());
  for (int r = 0; r < g.n(); ++r) row_phase[r] = std::polar(1.0, -g.k1(r) * s1);
  for (int c = 0; c < g.half(); ++c) col_phase[c] = std::polar(1.0, -g.k2(c) * s2);
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.half(); ++c) {
      const auto idx = g.index(r, c);
      if (g.nyquist(idx)) continue;
      out[idx] = row_phase[r] * col_phase[c] * field[idx];
    }
  }
  return out;
}

struct FluxParts {
  GridPtr fine;
  SpectralField theta;
  VelocityField u;
  PhysicalField theta_x, u1_x, u2_x;
  PhysicalField j_theta, j_u1, j_u2;
  PhysicalVector rho;
};

FluxParts flux_parts(const SpectralField& theta, double eps) {
  const auto fine = doubled(theta.grid());
  const auto u = riesz_perp(theta);
  FluxParts p{fine,
              resample(theta, fine),
              VelocityField::trusted({resample(u.c1, fine), resample(u.c2, fine)}),
              PhysicalField(fine),
              PhysicalField(fine),
              PhysicalField(fine),
              PhysicalField(fine),
              PhysicalField(fine),
              PhysicalField(fine),
              {PhysicalField(fine), PhysicalField(fine)}};
  p.theta_x = p.theta.to_physical();
  p.u1_x = p.u.c1.to_physical();
  p.u2_x = p.u.c2.to_physical();
  p.j_theta = mollify(p.theta, eps).to_physical();
  p.j_u1 = mollify(p.u.c1, eps).to_physical();
  p.j_u2 = mollify(p.u.c2, eps).to_physical();
  PhysicalField prod1(fine);
  PhysicalField prod2(fine);
  for (std::size_t i = 0; i < prod1.values.size(); ++i) {
    prod1.values[i] = p.u1_x.values[i] * p.theta_x.values[i];
    prod2.values[i] = p.u2_x.values[i] * p.theta_x.values[i];
  }
  const auto jp1 = mollify(SpectralField::from_physical(prod1), eps).to_physical();
  const auto jp2 = mollify(SpectralField::from_physical(prod2), eps).to_physical();
  for (std::size_t i = 0; i < prod1.values.size(); ++i) {
    p.rho.c1.values[i] = jp1.values[i] - p.j_u1.values[i] * p.j_theta.values[i];
    p.rho.c2.values[i] = jp2.values[i] - p.j_u2.values[i] * p.j_theta.values[i];
  }
  return p;
}

}  // namespace

PhysicalVector flux_rho(const SpectralField& theta, double eps) {
  if (eps < 0.0) throw std::invalid_argument("flux_rho: width must be nonnegative");
  if (eps == 0.0) {
    const auto fine = doubled(theta.grid());
    return {PhysicalField(fine), PhysicalField(fine)};
  }
  return flux_parts(theta, eps).rho;
}

double flux_rho_norm(const SpectralField& theta, double eps) {
  const auto rho = flux_rho(theta, eps);
  return std::sqrt(rho.c1.mean_square() + rho.c2.mean_square());
}

double flux_identity_residual(const SpectralField& theta, double eps, int points) {
  if (!(eps > 0.0)) throw std::invalid_argument("flux_identity_residual: width must be positive");
  const auto p = flux_parts(theta, eps);
  const auto nodes = mollifier::quadrature(points);
  const std::size_t size = p.theta_x.values.size();
  std::vector<double> r1(size, 0.0);
  std::vector<double> r2(size, 0.0);
  for (const auto& node : nodes) {
    const double s1 = eps * node.z1;
    const double s2 = eps * node.z2;
    const auto t = shifted(p.theta, s1, s2).to_physical();
    const auto a = shifted(p.u.c1, s1, s2).to_physical();
    const auto b = shifted(p.u.c2, s1, s2).to_physical();
    for (std::size_t i = 0; i < size; ++i) {
      const double dt = t.values[i] - p.theta_x.values[i];
      r1[i] += node.weight * (a.values[i] - p.u1_x.values[i]) * dt;
      r2[i] += node.weight * (b.values[i] - p.u2_x.values[i]) * dt;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double dtheta = p.theta_x.values[i] - p.j_theta.values[i];
    const double e1 = p.rho.c1.values[i] - r1[i] + (p.u1_x.values[i] - p.j_u1.values[i]) * dtheta;
    const double e2 = p.rho.c2.values[i] - r2[i] + (p.u2_x.values[i] - p.j_u2.values[i]) * dtheta;
    sum += e1 * e1 + e2 * e2;
  }
  return std::sqrt(sum / static_cast<double>(size));
}

double increment_norm(const SpectralField& theta, double shift1, double shift2) {
  const Grid& g = theta.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const Complex phase = std::polar(1.0, -(g.k1_of(i) * shift1 + g.k2_of(i) * shift2)) - 1.0;
    s += g.weight(i) * std::norm(phase * theta[i]);
  }
  return std::sqrt(s);
}

}  // namespace sqglab
