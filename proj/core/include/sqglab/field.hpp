#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sqglab/grid.hpp"

namespace sqglab {

/// Real-valued field sampled on a grid.
struct PhysicalField {
  GridPtr grid;
  std::vector<double> values;

  explicit PhysicalField(GridPtr g) : grid(std::move(g)), values(grid->physical_size(), 0.0) {}
  PhysicalField(GridPtr g, std::vector<double> v);

  double& operator()(int i1, int i2) { return values[static_cast<std::size_t>(i1) * grid->n() + i2]; }
  double operator()(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * grid->n() + i2]; }
  double min() const;
  double max() const;
  double max_abs() const;
  /// Normalized-measure mean of |v|^2, i.e. (2 pi)^-2 times the integral.
  double mean_square() const;
};

/// Real scalar field on the torus stored as Fourier coefficients (r2c half layout).
/// Hermitian symmetry is structural except on the k2 = 0 and k2 = n/2 columns,
/// which set_mode() keeps consistent.
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);

  static SpectralField from_physical(const PhysicalField& field);
  static SpectralField from_values(GridPtr grid, std::span<const double> values);
  /// Samples f(x1, x2) on the grid and transforms.
  static SpectralField from_function(GridPtr grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex& operator[](std::size_t idx) { return coeffs_[idx]; }
  const Complex& operator[](std::size_t idx) const { return coeffs_[idx]; }

  /// Coefficient of exp(i(k1 x1 + k2 x2)) for any signed wavenumber in range.
  Complex mode(int k1, int k2) const;
  /// Sets the coefficient of (k1, k2) and its Hermitian partner.
  void set_mode(int k1, int k2, Complex value);
  /// Adds a*cos(k.x) + b*sin(k.x).
  void add_wave(int k1, int k2, double cos_amplitude, double sin_amplitude);

  PhysicalField to_physical() const;
  std::vector<double> values() const { return to_physical().values; }

  double mean() const { return coeffs_[0].real(); }
  void remove_mean() { coeffs_[0] = 0.0; }
  /// Zeroes every mode outside the dealiasing truncation.
  void truncate();
  /// Fraction of L^2 energy outside the truncation (0 for an empty field).
  double energy_outside_truncation() const;
  /// Maximum violation of coeff(-k) = conj(coeff(k)) on the self-paired columns.
  double hermitian_defect() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  SpectralField operator-() const { return (*this) * -1.0; }

 private:
  void check_same_grid(const SpectralField& other) const;

  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

/// Pair of spectral components.
struct VectorField {
  SpectralField c1;
  SpectralField c2;

  explicit VectorField(GridPtr grid) : c1(grid), c2(grid) {}
  VectorField(SpectralField a, SpectralField b);

  const Grid& grid() const { return c1.grid(); }
  const GridPtr& grid_ptr() const { return c1.grid_ptr(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
};

/// Divergence-free, mean-free vector field. Construction through checked() or
/// through an operator that produces divergence-free output.
class VelocityField : public VectorField {
 public:
  explicit VelocityField(GridPtr grid) : VectorField(std::move(grid)) {}

  /// Throws std::invalid_argument if the relative divergence exceeds tol.
  static VelocityField checked(VectorField v, double tol = 1e-10);
  /// Wraps without checking; the caller guarantees the invariant.
  static VelocityField trusted(VectorField v);

  VelocityField& operator+=(const VelocityField& o) {
    VectorField::operator+=(o);
    return *this;
  }
  VelocityField& operator-=(const VelocityField& o) {
    VectorField::operator-=(o);
    return *this;
  }
  VelocityField& operator*=(double s) {
    VectorField::operator*=(s);
    return *this;
  }
  friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
  friend VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
  friend VelocityField operator*(double s, VelocityField a) { return a *= s; }

 private:
  explicit VelocityField(VectorField v) : VectorField(std::move(v)) {}
};

/// Two physical components on a common grid.
struct PhysicalVector {
  PhysicalField c1;
  PhysicalField c2;
};

/// Zero-pads (or truncates) coefficients onto another grid of the same period.
SpectralField resample(const SpectralField& field, const GridPtr& target);

}  // namespace sqglab
