#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sqglab {

using Complex = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Square 2*pi-periodic collocation grid with its real-to-complex FFT plans.
///
/// Physical samples are stored row-major, index (i1, i2) <-> x = 2*pi*(i1, i2)/n.
/// Spectral coefficients use the r2c half layout: n rows (k1) by n/2+1 columns
/// (k2 >= 0). Coefficients are normalized so that
///   theta(x) = sum_k coeff(k) exp(i k.x),
/// i.e. forward() divides by n^2.
///
/// Grids are immutable and shared; obtain them through Grid::make(), which
/// caches one instance per (n, dealias_fraction). Transforms are safe to call
/// concurrently from several threads.
class Grid {
 public:
  static GridPtr make(int n, double dealias_fraction = 2.0 / 3.0);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  double dealias_fraction() const { return dealias_fraction_; }
  std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * half(); }
  double spacing() const;

  /// Signed wavenumber of row i (in -n/2+1 .. n/2).
  int k1(int row) const { return row <= n_ / 2 ? row : row - n_; }
  /// Wavenumber of column j (in 0 .. n/2).
  int k2(int col) const { return col; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * half() + col;
  }
  /// Row index holding wavenumber k1 (any integer, reduced modulo n).
  int row_of(int k1) const { return ((k1 % n_) + n_) % n_; }

  double k_squared(std::size_t idx) const { return ksq_[idx]; }
  double k_magnitude(std::size_t idx) const { return kmag_[idx]; }
  double k1_of(std::size_t idx) const { return k1v_[idx]; }
  double k2_of(std::size_t idx) const { return k2v_[idx]; }
  /// True when the mode survives the dealiasing truncation.
  bool retained(std::size_t idx) const { return keep_[idx] != 0; }
  /// True on the Nyquist row or column, where odd multipliers are not real-representable.
  bool nyquist(std::size_t idx) const { return nyq_[idx] != 0; }
  /// Multiplicity of a stored coefficient in full-plane sums (1 or 2).
  double weight(std::size_t idx) const { return weight_[idx]; }
  /// Largest |k_i| kept by the truncation.
  int cutoff() const { return cutoff_; }

  /// Physical -> spectral, normalized by 1/n^2.
  void forward(std::span<const double> physical, std::span<Complex> spectral) const;
  /// Spectral -> physical. Input is left untouched.
  void inverse(std::span<const Complex> spectral, std::span<double> physical) const;

  std::vector<double> coordinates() const;

 private:
  Grid(int n, double dealias_fraction);

  int n_;
  double dealias_fraction_;
  int cutoff_;
  std::vector<double> ksq_, kmag_, k1v_, k2v_, weight_;
  std::vector<unsigned char> keep_, nyq_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace sqglab
