#include "sqglab/field.hpp"

#include "sqglab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqglab {

PhysicalField::PhysicalField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->physical_size()) {
    throw std::invalid_argument("PhysicalField: value count does not match grid");
  }
}

double PhysicalField::min() const { return *std::min_element(values.begin(), values.end()); }
double PhysicalField::max() const { return *std::max_element(values.begin(), values.end()); }

double PhysicalField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double PhysicalField::mean_square() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s / static_cast<double>(values.size());
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->spectral_size()) {}

SpectralField SpectralField::from_physical(const PhysicalField& field) {
  SpectralField out(field.grid);
  field.grid->forward(field.values, out.coeffs_);
  return out;
}

SpectralField SpectralField::from_values(GridPtr grid, std::span<const double> values) {
  SpectralField out(grid);
  grid->forward(values, out.coeffs_);
  return out;
}

SpectralField SpectralField::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
  PhysicalField phys(grid);
  const auto x = grid->coordinates();
  const int n = grid->n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) phys(i, j) = f(x[i], x[j]);
  }
  return from_physical(phys);
}

Complex SpectralField::mode(int k1, int k2) const {
  const int n = grid_->n();
  if (std::abs(k1) > n / 2 || std::abs(k2) > n / 2) return 0.0;
  if (k2 < 0) return std::conj(coeffs_[grid_->index(grid_->row_of(-k1), -k2)]);
  return coeffs_[grid_->index(grid_->row_of(k1), k2)];
}

void SpectralField::set_mode(int k1, int k2, Complex value) {
  const int n = grid_->n();
  if (std::abs(k1) > n / 2 || std::abs(k2) > n / 2) {
    throw std::out_of_range("set_mode: wavenumber outside grid");
  }
  if (k2 < 0) {
    k1 = -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  coeffs_[grid_->index(grid_->row_of(k1), k2)] = value;
  if (k2 == 0 || k2 == n / 2) {
    const std::size_t partner = grid_->index(grid_->row_of(-k1), k2);
    if (partner == grid_->index(grid_->row_of(k1), k2)) {
      coeffs_[partner] = value.real();
    } else {
      coeffs_[partner] = std::conj(value);
    }
  }
}

void SpectralField::add_wave(int k1, int k2, double cos_amplitude, double sin_amplitude) {
  if (k1 == 0 && k2 == 0) {
    coeffs_[0] += cos_amplitude;
    return;
  }
  // a cos + b sin = (a - i b)/2 e^{ikx} + c.c.
  const Complex c(0.5 * cos_amplitude, -0.5 * sin_amplitude);
  set_mode(k1, k2, mode(k1, k2) + c);
}

PhysicalField SpectralField::to_physical() const {
  PhysicalField out(grid_);
  grid_->inverse(coeffs_, out.values);
  return out;
}

void SpectralField::truncate() {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!grid_->retained(i)) coeffs_[i] = 0.0;
  }
}

double SpectralField::energy_outside_truncation() const {
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double e = grid_->weight(i) * std::norm(coeffs_[i]);
    total += e;
    if (!grid_->retained(i)) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

double SpectralField::hermitian_defect() const {
  const int n = grid_->n();
  double defect = 0.0;
  for (int col : {0, n / 2}) {
    for (int row = 0; row < n; ++row) {
      const int partner = grid_->row_of(-grid_->k1(row));
      defect = std::max(defect, std::abs(coeffs_[grid_->index(row, col)] -
                                         std::conj(coeffs_[grid_->index(partner, col)])));
    }
  }
  return defect;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

void SpectralField::check_same_grid(const SpectralField& other) const {
  if (other.grid_ != grid_) throw std::invalid_argument("SpectralField: grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

VectorField::VectorField(SpectralField a, SpectralField b) : c1(std::move(a)), c2(std::move(b)) {
  if (c1.grid_ptr() != c2.grid_ptr()) throw std::invalid_argument("VectorField: component grids differ");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  c1 -= o.c1;
  c2 -= o.c2;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  c1 *= s;
  c2 *= s;
  return *this;
}

VelocityField VelocityField::checked(VectorField v, double tol) {
  const double rel = relative_divergence(v);
  if (!(rel <= tol)) {
    throw std::invalid_argument("VelocityField: input is not divergence-free (relative divergence " +
                                std::to_string(rel) + ")");
  }
  return VelocityField(std::move(v));
}

VelocityField VelocityField::trusted(VectorField v) { return VelocityField(std::move(v)); }

SpectralField resample(const SpectralField& field, const GridPtr& target) {
  const Grid& src = field.grid();
  SpectralField out(target);
  const int limit = std::min(src.n(), target->n()) / 2;  // exclusive: drop either Nyquist
  for (int row = 0; row < src.n(); ++row) {
    const int k1 = src.k1(row);
    if (std::abs(k1) >= limit) continue;
    for (int col = 0; col < limit; ++col) {
      out[target->index(target->row_of(k1), col)] = field[src.index(row, col)];
    }
  }
  return out;
}

}  // namespace sqglab
