#pragma once

// Independent reference computations. Nothing here calls the transforms or the
// operator layer of the library: fields enter as coefficient tables read
// through SpectralField::mode and everything else is evaluated directly.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "sqglab/field.hpp"

namespace sqglab::oracle {

using Modes = std::map<std::pair<int, int>, std::complex<double>>;

/// All coefficients with max(|k1|,|k2|) <= kmax, read off a field.
inline Modes modes_of(const SpectralField& f, int kmax) {
  Modes m;
  for (int a = -kmax; a <= kmax; ++a) {
    for (int b = -kmax; b <= kmax; ++b) {
      const auto c = f.mode(a, b);
      if (c != 0.0) m[{a, b}] = c;
    }
  }
  return m;
}

inline std::complex<double> at(const Modes& m, int a, int b) {
  auto it = m.find({a, b});
  return it == m.end() ? std::complex<double>(0.0) : it->second;
}

/// Largest coefficient difference between a table and a field over the box.
inline double max_difference(const Modes& expected, const SpectralField& actual, int kmax) {
  double d = 0.0;
  for (int a = -kmax; a <= kmax; ++a) {
    for (int b = -kmax; b <= kmax; ++b) d = std::max(d, std::abs(at(expected, a, b) - actual.mode(a, b)));
  }
  return d;
}

inline double max_abs(const Modes& m) {
  double s = 0.0;
  for (const auto& [k, v] : m) s = std::max(s, std::abs(v));
  return s;
}

/// Riesz-perp velocity coefficients: u^(k) = (-i k2, i k1) theta^(k) / |k|.
inline std::pair<Modes, Modes> riesz_perp(const Modes& theta) {
  const std::complex<double> I(0.0, 1.0);
  Modes u1, u2;
  for (const auto& [k, c] : theta) {
    const double mag = std::hypot(k.first, k.second);
    if (mag == 0.0) continue;
    u1[k] = -I * static_cast<double>(k.second) / mag * c;
    u2[k] = I * static_cast<double>(k.first) / mag * c;
  }
  return {u1, u2};
}

/// Direct convolution of (a . grad) b for a velocity table (a1, a2) and a
/// scalar table b; result restricted to max(|k1|,|k2|) <= keep.
inline Modes advect(const Modes& a1, const Modes& a2, const Modes& b, int keep) {
  const std::complex<double> I(0.0, 1.0);
  Modes out;
  std::map<std::pair<int, int>, bool> support;
  for (const auto& [j, v] : a1) support[j] = true;
  for (const auto& [j, v] : a2) support[j] = true;
  for (const auto& [j, flag] : support) {
    (void)flag;
    const auto x1 = at(a1, j.first, j.second);
    const auto x2 = at(a2, j.first, j.second);
    for (const auto& [l, bl] : b) {
      const int k1 = j.first + l.first;
      const int k2 = j.second + l.second;
      if (std::abs(k1) > keep || std::abs(k2) > keep) continue;
      out[{k1, k2}] += (x1 * (I * static_cast<double>(l.first)) + x2 * (I * static_cast<double>(l.second))) * bl;
    }
  }
  return out;
}

/// Leray projection applied mode by mode: (w . k^perp) k^perp / |k|^2.
inline std::pair<Modes, Modes> project(const Modes& w1, const Modes& w2) {
  Modes p1, p2;
  std::map<std::pair<int, int>, bool> support;
  for (const auto& [k, v] : w1) support[k] = true;
  for (const auto& [k, v] : w2) support[k] = true;
  for (const auto& [k, flag] : support) {
    (void)flag;
    const double ksq = static_cast<double>(k.first * k.first + k.second * k.second);
    if (ksq == 0.0) continue;
    const double q1 = -k.second;
    const double q2 = k.first;
    const auto along = (q1 * at(w1, k.first, k.second) + q2 * at(w2, k.first, k.second)) / ksq;
    p1[k] = along * q1;
    p2[k] = along * q2;
  }
  return {p1, p2};
}

/// Fourier transform of the normalized bump kernel at wavevector (x1, x2),
/// by a Cartesian midpoint rule over the unit square [-1,1]^2.
inline double kernel_transform(double xi1, double xi2, int points = 600) {
  const double h = 2.0 / points;
  double mass = 0.0;
  double value = 0.0;
  for (int a = 0; a < points; ++a) {
    const double z1 = -1.0 + (a + 0.5) * h;
    for (int b = 0; b < points; ++b) {
      const double z2 = -1.0 + (b + 0.5) * h;
      const double r2 = z1 * z1 + z2 * z2;
      if (r2 >= 1.0) continue;
      const double w = std::exp(-1.0 / (1.0 - r2));
      mass += w;
      value += w * std::cos(xi1 * z1 + xi2 * z2);
    }
  }
  return value / mass;
}

/// Trapezoid rule on [0, T] for uniformly spaced samples.
inline double trapezoid(const std::vector<double>& y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sqglab::oracle
