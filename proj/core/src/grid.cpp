#include "sqglab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqglab {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex>& inverse_scratch(std::size_t size) {
  thread_local std::vector<Complex> scratch;
  if (scratch.size() < size) scratch.resize(size);
  return scratch;
}

std::vector<double>& forward_scratch(std::size_t size) {
  thread_local std::vector<double> scratch;
  if (scratch.size() < size) scratch.resize(size);
  return scratch;
}

int truncation_cutoff(int n, double fraction) {
  int c = static_cast<int>(std::floor(fraction * n / 2.0 + 1e-12));
  c = std::min(c, n / 2 - 1);
  // Quadratic products of retained modes must not alias back onto retained modes.
  if (fraction <= 2.0 / 3.0 + 1e-12 && 3 * c >= n) c = (n - 1) / 3;
  return c;
}

}  // namespace

GridPtr Grid::make(int n, double dealias_fraction) {
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 16, got " + std::to_string(n));
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw std::invalid_argument("dealias fraction must lie in (0, 1]");
  }
  static std::mutex cache_mutex;
  static std::map<std::pair<int, double>, GridPtr> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(n, dealias_fraction);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  GridPtr grid(new Grid(n, dealias_fraction));
  cache.emplace(key, grid);
  return grid;
}

Grid::Grid(int n, double dealias_fraction)
    : n_(n), dealias_fraction_(dealias_fraction), cutoff_(truncation_cutoff(n, dealias_fraction)) {
  const std::size_t size = spectral_size();
  ksq_.resize(size);
  kmag_.resize(size);
  k1v_.resize(size);
  k2v_.resize(size);
  weight_.resize(size);
  keep_.resize(size);
  nyq_.resize(size);
  for (int row = 0; row < n_; ++row) {
    for (int col = 0; col < half(); ++col) {
      const std::size_t idx = index(row, col);
      const int a = k1(row);
      const int b = k2(col);
      k1v_[idx] = a;
      k2v_[idx] = b;
      ksq_[idx] = static_cast<double>(a) * a + static_cast<double>(b) * b;
      kmag_[idx] = std::sqrt(ksq_[idx]);
      weight_[idx] = (b == 0 || b == n_ / 2) ? 1.0 : 2.0;
      nyq_[idx] = (a == n_ / 2 || b == n_ / 2) ? 1 : 0;
      keep_[idx] = (std::abs(a) <= cutoff_ && b <= cutoff_ && !nyq_[idx]) ? 1 : 0;
    }
  }

  std::vector<double> phys(physical_size());
  std::vector<Complex> spec(size);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_2d(n_, n_, phys.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r_2d(n_, n_, reinterpret_cast<fftw_complex*>(spec.data()), phys.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

double Grid::spacing() const { return 2.0 * std::numbers::pi / n_; }

void Grid::forward(std::span<const double> physical, std::span<Complex> spectral) const {
  if (physical.size() != physical_size() || spectral.size() != spectral_size()) {
    throw std::invalid_argument("Grid::forward: buffer size mismatch");
  }
  // r2c may clobber its input for some plans; never write into the caller's buffer.
  auto& in = forward_scratch(physical_size());
  std::copy(physical.begin(), physical.end(), in.begin());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(spectral.data()));
  const double scale = 1.0 / static_cast<double>(physical_size());
  for (auto& c : spectral) c *= scale;
}

void Grid::inverse(std::span<const Complex> spectral, std::span<double> physical) const {
  if (physical.size() != physical_size() || spectral.size() != spectral_size()) {
    throw std::invalid_argument("Grid::inverse: buffer size mismatch");
  }
  auto& in = inverse_scratch(spectral_size());
  std::copy(spectral.begin(), spectral.end(), in.begin());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(in.data()),
                       physical.data());
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = spacing() * i;
  return x;
}

}  // namespace sqglab
