#include "sqglab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "sqglab/mollifier.hpp"

namespace sqglab {

namespace {

const Complex kI(0.0, 1.0);

template <class Multiplier>
SpectralField apply(const SpectralField& field, Multiplier&& m) {
  SpectralField out(field.grid_ptr());
  const Grid& g = field.grid();
  for (std::size_t i = 0; i < g.spectral_size(); ++i) out[i] = m(i) * field[i];
  return out;
}

// Odd multipliers (i k) are not representable on the Nyquist row/column of a real field.
template <class Multiplier>
SpectralField apply_odd(const SpectralField& field, Multiplier&& m) {
  const Grid& g = field.grid();
  return apply(field, [&](std::size_t i) -> Complex { return g.nyquist(i) ? Complex(0.0) : m(i); });
}

double mean_free_tolerance(const SpectralField& field) {
  return 1e-12 * std::sqrt(std::max(l2_norm_sq(field), std::numeric_limits<double>::min()));
}

struct MollifierCache {
  std::mutex mutex;
  std::map<double, std::unordered_map<long long, double>> tables;
};

MollifierCache& mollifier_cache() {
  static MollifierCache cache;
  return cache;
}

std::vector<double> mollifier_multipliers(const Grid& g, double eps) {
  auto& cache = mollifier_cache();
  std::vector<double> out(g.spectral_size());
  std::lock_guard lock(cache.mutex);
  auto& table = cache.tables[eps];
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const auto key = static_cast<long long>(g.k_squared(i));
    auto it = table.find(key);
    if (it == table.end()) {
      it = table.emplace(key, mollifier::transform(eps * g.k_magnitude(i))).first;
    }
    out[i] = it->second;
  }
  return out;
}

double sum_weighted(const SpectralField& field, auto&& symbol) {
  const Grid& g = field.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) s += g.weight(i) * symbol(i) * std::norm(field[i]);
  return s;
}

}  // namespace

SpectralField lambda_pow(const SpectralField& field, double s) {
  const Grid& g = field.grid();
  if (s < 0.0 && std::abs(field.mean()) > mean_free_tolerance(field)) {
    throw std::invalid_argument("lambda_pow: negative power of a field with nonzero mean");
  }
  if (s == 0.0) return field;
  return apply(field, [&](std::size_t i) -> Complex {
    const double k = g.k_magnitude(i);
    return k == 0.0 ? 0.0 : std::pow(k, s);
  });
}

SpectralField damping(const SpectralField& field) {
  const Grid& g = field.grid();
  return apply(field, [&](std::size_t i) -> Complex { return 1.0 + g.k_magnitude(i); });
}

SpectralField laplacian(const SpectralField& field) {
  const Grid& g = field.grid();
  return apply(field, [&](std::size_t i) -> Complex { return -g.k_squared(i); });
}

SpectralField derivative(const SpectralField& field, int axis) {
  const Grid& g = field.grid();
  if (axis == 0) return apply_odd(field, [&](std::size_t i) { return kI * g.k1_of(i); });
  if (axis == 1) return apply_odd(field, [&](std::size_t i) { return kI * g.k2_of(i); });
  throw std::invalid_argument("derivative: axis must be 0 or 1");
}

VectorField gradient(const SpectralField& field) { return {derivative(field, 0), derivative(field, 1)}; }

VectorField perp_gradient(const SpectralField& field) {
  return {-derivative(field, 1), derivative(field, 0)};
}

SpectralField divergence(const VectorField& v) { return derivative(v.c1, 0) + derivative(v.c2, 1); }

SpectralField curl(const VectorField& v) { return derivative(v.c2, 0) - derivative(v.c1, 1); }

VelocityField riesz_perp(const SpectralField& theta) {
  const Grid& g = theta.grid();
  auto u1 = apply_odd(theta, [&](std::size_t i) -> Complex {
    const double k = g.k_magnitude(i);
    return k == 0.0 ? Complex(0.0) : -kI * g.k2_of(i) / k;
  });
  auto u2 = apply_odd(theta, [&](std::size_t i) -> Complex {
    const double k = g.k_magnitude(i);
    return k == 0.0 ? Complex(0.0) : kI * g.k1_of(i) / k;
  });
  return VelocityField::trusted({std::move(u1), std::move(u2)});
}

VelocityField leray_project(const VectorField& v) {
  const Grid& g = v.grid();
  VectorField out(v.grid_ptr());
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const double ksq = g.k_squared(i);
    if (ksq == 0.0) continue;
    // (v . j_perp/|j|) j_perp/|j| with j_perp = (-k2, k1)
    const double p1 = -g.k2_of(i);
    const double p2 = g.k1_of(i);
    const Complex along = (p1 * v.c1[i] + p2 * v.c2[i]) / ksq;
    out.c1[i] = along * p1;
    out.c2[i] = along * p2;
  }
  return VelocityField::trusted(std::move(out));
}

VelocityField stokes(const VelocityField& u) {
  return VelocityField::trusted({-laplacian(u.c1), -laplacian(u.c2)});
}

VelocityField velocity_from_stream(const SpectralField& psi) {
  return VelocityField::trusted(perp_gradient(psi));
}

double relative_divergence(const VectorField& v) {
  const Grid& g = v.grid();
  double div = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const Complex d = g.k1_of(i) * v.c1[i] + g.k2_of(i) * v.c2[i];
    div += g.weight(i) * std::norm(d);
    scale += g.weight(i) * g.k_squared(i) * (std::norm(v.c1[i]) + std::norm(v.c2[i]));
  }
  return scale > 0.0 ? std::sqrt(div / scale) : 0.0;
}

double max_divergence(const VectorField& v) {
  const Grid& g = v.grid();
  double m = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    m = std::max(m, std::abs(g.k1_of(i) * v.c1[i] + g.k2_of(i) * v.c2[i]));
  }
  return m;
}

SpectralField mollify(const SpectralField& field, double eps) {
  if (eps < 0.0) throw std::invalid_argument("mollify: width must be nonnegative");
  if (eps == 0.0) return field;
  const auto m = mollifier_multipliers(field.grid(), eps);
  return apply(field, [&](std::size_t i) -> Complex { return m[i]; });
}

VectorField mollify(const VectorField& v, double eps) { return {mollify(v.c1, eps), mollify(v.c2, eps)}; }

double inner(const SpectralField& a, const SpectralField& b) {
  if (a.grid_ptr() != b.grid_ptr()) throw std::invalid_argument("inner: grid mismatch");
  const Grid& g = a.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) s += g.weight(i) * (std::conj(a[i]) * b[i]).real();
  return s;
}

double inner(const VectorField& a, const VectorField& b) { return inner(a.c1, b.c1) + inner(a.c2, b.c2); }

double l2_norm_sq(const SpectralField& field) {
  return sum_weighted(field, [](std::size_t) { return 1.0; });
}

double h12_norm_sq(const SpectralField& field) {
  const Grid& g = field.grid();
  return sum_weighted(field, [&](std::size_t i) { return 1.0 + g.k_magnitude(i); });
}

double h1_seminorm_sq(const SpectralField& field) {
  const Grid& g = field.grid();
  return sum_weighted(field, [&](std::size_t i) { return g.k_squared(i); });
}

double h2_seminorm_sq(const SpectralField& field) {
  const Grid& g = field.grid();
  return sum_weighted(field, [&](std::size_t i) { return g.k_squared(i) * g.k_squared(i); });
}

PhysicalField sample(const SpectralField& field, int oversample) {
  if (oversample < 1) throw std::invalid_argument("sample: oversampling factor must be >= 1");
  if (oversample == 1) return field.to_physical();
  const auto fine = Grid::make(field.grid().n() * oversample, field.grid().dealias_fraction());
  return resample(field, fine).to_physical();
}

double lp_norm(const SpectralField& field, double p, int oversample) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto phys = sample(field, oversample);
  if (std::isinf(p)) return phys.max_abs();
  double s = 0.0;
  for (double v : phys.values) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(phys.values.size()), 1.0 / p);
}

double linf_norm(const SpectralField& field, int oversample) {
  return lp_norm(field, std::numeric_limits<double>::infinity(), oversample);
}

double norm(const SpectralField& field, NormKind which, double p, int oversample) {
  switch (which) {
    case NormKind::L2:
      return std::sqrt(l2_norm_sq(field));
    case NormKind::Lp:
      return lp_norm(field, p, oversample);
    case NormKind::H12:
      return std::sqrt(h12_norm_sq(field));
    case NormKind::H1:
      return std::sqrt(h1_seminorm_sq(field));
  }
  throw std::invalid_argument("norm: unknown kind");
}

double l2_norm_sq(const VectorField& v) { return l2_norm_sq(v.c1) + l2_norm_sq(v.c2); }
double h12_norm_sq(const VectorField& v) { return h12_norm_sq(v.c1) + h12_norm_sq(v.c2); }
double h1_seminorm_sq(const VectorField& v) { return h1_seminorm_sq(v.c1) + h1_seminorm_sq(v.c2); }
double h2_seminorm_sq(const VectorField& v) { return h2_seminorm_sq(v.c1) + h2_seminorm_sq(v.c2); }

double linf_norm(const VectorField& v, int oversample) {
  const auto a = sample(v.c1, oversample);
  const auto b = sample(v.c2, oversample);
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::hypot(a.values[i], b.values[i]));
  return m;
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  if (a.grid_ptr() != b.grid_ptr()) throw std::invalid_argument("dealiased_product: grid mismatch");
  auto pa = a.to_physical();
  const auto pb = b.to_physical();
  for (std::size_t i = 0; i < pa.values.size(); ++i) pa.values[i] *= pb.values[i];
  auto out = SpectralField::from_physical(pa);
  out.truncate();
  return out;
}

CordobaDensity cordoba_density(const SpectralField& phi) {
  CordobaDensity result{PhysicalField(Grid::make(2 * phi.grid().n(), phi.grid().dealias_fraction())), false};
  result.under_resolved = phi.energy_outside_truncation() > 1e-8;
  const auto fine = result.density.grid;
  const auto phi_f = resample(phi, fine);
  const auto values = phi_f.to_physical();
  const auto lambda_phi = lambda_pow(phi_f, 1.0).to_physical();
  PhysicalField square(fine);
  for (std::size_t i = 0; i < square.values.size(); ++i) square.values[i] = values.values[i] * values.values[i];
  const auto lambda_square = lambda_pow(SpectralField::from_physical(square), 1.0).to_physical();
  for (std::size_t i = 0; i < square.values.size(); ++i) {
    result.density.values[i] = 2.0 * values.values[i] * lambda_phi.values[i] - lambda_square.values[i];
  }
  return result;
}

}  // namespace sqglab
