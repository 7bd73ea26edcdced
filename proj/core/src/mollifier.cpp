#include "sqglab/mollifier.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqglab::mollifier {

namespace {

constexpr int kPanels = 8;

// Composite 32-point Gauss-Legendre on [0,1]. The bump is flat at r = 1, so the
// integrand is smooth on the closed interval and the rule converges rapidly.
template <class F>
double radial_integral(F&& f) {
  using Rule = boost::math::quadrature::gauss<double, 32>;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double a = static_cast<double>(p) / kPanels;
    const double b = static_cast<double>(p + 1) / kPanels;
    total += Rule::integrate(f, a, b);
  }
  return total;
}

}  // namespace

double bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double bump_mass() {
  static const double mass = 2.0 * std::numbers::pi * radial_integral([](double r) { return r * bump(r); });
  return mass;
}

double kernel(double z1, double z2) { return bump(std::hypot(z1, z2)) / bump_mass(); }

double transform(double rho) {
  if (rho == 0.0) return 1.0;
  // Radial Fourier transform: 2 pi int_0^1 r J0(rho r) j(r) dr.
  const double value = 2.0 * std::numbers::pi *
                       radial_integral([rho](double r) { return r * std::cyl_bessel_j(0.0, rho * r) * bump(r); });
  return value / bump_mass();
}

std::vector<QuadratureNode> quadrature(int points) {
  if (points < 1) throw std::invalid_argument("mollifier quadrature needs at least one point per axis");
  std::vector<QuadratureNode> nodes;
  const double h = 2.0 / points;
  double total = 0.0;
  for (int a = 0; a < points; ++a) {
    const double z1 = -1.0 + (a + 0.5) * h;
    for (int b = 0; b < points; ++b) {
      const double z2 = -1.0 + (b + 0.5) * h;
      const double w = bump(std::hypot(z1, z2));
      if (w <= 0.0) continue;
      nodes.push_back({z1, z2, w});
      total += w;
    }
  }
  for (auto& node : nodes) node.weight /= total;
  return nodes;
}

}  // namespace sqglab::mollifier
