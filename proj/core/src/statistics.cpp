#include "sqglab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

namespace sqglab {

namespace {

std::vector<SpectralField> lowest_modes(const GridPtr& grid, int count) {
  if (count < 2 || count % 2 != 0 || count > 32) {
    throw std::invalid_argument("cylindrical functional: test count must be even and in [2, 32]");
  }
  std::vector<std::tuple<int, int, int>> vectors;  // (|k|^2, k2, k1)
  for (int k1 = -4; k1 <= 4; ++k1) {
    for (int k2 = 0; k2 <= 4; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      vectors.emplace_back(k1 * k1 + k2 * k2, k2, k1);
    }
  }
  std::sort(vectors.begin(), vectors.end());
  std::vector<SpectralField> out;
  for (const auto& [ksq, k2, k1] : vectors) {
    if (static_cast<int>(out.size()) == count) break;
    if (std::max(std::abs(k1), k2) > grid->cutoff()) throw std::invalid_argument("cylindrical functional: grid too coarse");
    SpectralField c(grid);
    c.add_wave(k1, k2, 1.0, 0.0);
    SpectralField s(grid);
    s.add_wave(k1, k2, 0.0, 1.0);
    out.push_back(std::move(c));
    out.push_back(std::move(s));
  }
  return out;
}

double flux_divergence_pairing(const SpectralField& j_theta, const SpectralField& theta, double eps) {
  const auto rho = flux_rho(theta, eps);
  const auto fine = rho.c1.grid;
  const auto r1 = SpectralField::from_physical(rho.c1);
  const auto r2 = SpectralField::from_physical(rho.c2);
  return inner(resample(j_theta, fine), derivative(r1, 0) + derivative(r2, 1));
}

}  // namespace

CylindricalFunctional::CylindricalFunctional(double eps, std::vector<SpectralField> tests, Profile psi,
                                             Gradient gradient)
    : eps_(eps), psi_(std::move(psi)), gradient_(std::move(gradient)) {
  if (eps < 0.0) throw std::invalid_argument("cylindrical functional: eps must be >= 0");
  if (tests.empty()) throw std::invalid_argument("cylindrical functional: needs at least one test field");
  mollified_.reserve(tests.size());
  for (const auto& w : tests) mollified_.push_back(mollify(w, eps));
}

CylindricalFunctional CylindricalFunctional::quadratic(const GridPtr& grid, double eps, int count) {
  return CylindricalFunctional(
      eps, lowest_modes(grid, count),
      [](std::span<const double> y) {
        double s = 0.0;
        for (double v : y) s += v * v;
        return 0.5 * s;
      },
      [](std::span<const double> y, std::span<double> g) { std::copy(y.begin(), y.end(), g.begin()); });
}

CylindricalFunctional CylindricalFunctional::constant(const GridPtr& grid, double eps, double value, int count) {
  return CylindricalFunctional(
      eps, lowest_modes(grid, count), [value](std::span<const double>) { return value; },
      [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); });
}

std::vector<double> CylindricalFunctional::coordinates(const SpectralField& theta) const {
  std::vector<double> y;
  y.reserve(mollified_.size());
  for (const auto& w : mollified_) y.push_back(inner(theta, w));
  return y;
}

double CylindricalFunctional::value(const SpectralField& theta) const { return psi_(coordinates(theta)); }

SpectralField CylindricalFunctional::derivative(const SpectralField& theta) const {
  const auto y = coordinates(theta);
  std::vector<double> g(y.size());
  gradient_(y, g);
  SpectralField out(theta.grid_ptr());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] != 0.0) out += g[k] * mollified_[k];
  }
  return out;
}

SpectralField nonlinear_functional_N(const SpectralField& theta, double nu, double gamma, const SpectralField* forcing) {
  auto out = sqg_transport(theta);
  if (gamma != 0.0) out += gamma * damping(theta);
  if (nu != 0.0) out -= nu * laplacian(theta);
  if (forcing) out -= *forcing;
  return out;
}

FDecomposition decompose_F(const SpectralField& theta, const CylindricalFunctional& functional, double nu, double gamma,
                           const SpectralField* forcing) {
  const auto p = functional.derivative(theta);
  const auto u = riesz_perp(theta);
  FDecomposition d;
  d.f1 = gamma * inner(theta, damping(p)) - (forcing ? inner(*forcing, p) : 0.0);
  d.f2 = -inner(theta, laplacian(p));
  d.f3 = -(inner(dealiased_product(theta, u.c1), sqglab::derivative(p, 0)) +
           inner(dealiased_product(theta, u.c2), sqglab::derivative(p, 1)));
  d.combined = d.f1 + nu * d.f2 + d.f3;
  d.direct = inner(nonlinear_functional_N(theta, nu, gamma, forcing), p);
  return d;
}

StationarityAccumulator::StationarityAccumulator(CylindricalFunctional functional, double nu, double gamma,
                                                 std::optional<SpectralField> forcing)
    : functional_(std::move(functional)), nu_(nu), gamma_(gamma), forcing_(std::move(forcing)) {}

void StationarityAccumulator::add(double t, const SpectralField& theta) {
  const auto n = nonlinear_functional_N(theta, nu_, gamma_, forcing_ ? &*forcing_ : nullptr);
  const double g = inner(n, functional_.derivative(theta));
  const double psi = functional_.value(theta);
  if (count_ == 0) {
    t0_ = t;
    psi0_ = psi;
  } else {
    if (!(t > t_)) throw std::invalid_argument("stationarity accumulator: times must increase");
    integral_ += 0.5 * (t - t_) * (last_ + g);
  }
  t_ = t;
  psi_ = psi;
  last_ = g;
  max_abs_psi_ = std::max(max_abs_psi_, std::abs(psi));
  ++count_;
}

StationarityReport StationarityAccumulator::report() const {
  StationarityReport r;
  r.samples = count_;
  r.horizon = t_ - t0_;
  r.max_abs_psi = max_abs_psi_;
  if (r.horizon > 0.0) {
    r.residual = integral_ / r.horizon;
    r.boundary = (psi_ - psi0_) / r.horizon;
    r.defect = r.residual + r.boundary;
  }
  return r;
}

StationarityReport stationarity_residual(const std::vector<double>& times, const std::vector<SpectralField>& states,
                                         const CylindricalFunctional& functional, double nu, double gamma,
                                         const SpectralField* forcing) {
  if (times.size() != states.size()) throw std::invalid_argument("stationarity_residual: size mismatch");
  StationarityAccumulator acc(functional, nu, gamma, forcing ? std::optional<SpectralField>(*forcing) : std::nullopt);
  for (std::size_t i = 0; i < times.size(); ++i) acc.add(times[i], states[i]);
  return acc.report();
}

std::vector<double> EmpiricalMeasure::weights() const {
  return std::vector<double>(states_.size(), states_.empty() ? 0.0 : 1.0 / static_cast<double>(states_.size()));
}

double EmpiricalMeasure::integrate(const std::function<double(const SpectralField&)>& observable) const {
  if (states_.empty()) throw std::invalid_argument("empirical measure: no samples");
  double mean = 0.0;
  long k = 0;
  for (const auto& s : states_) {
    const double x = observable(s);
    ++k;
    mean += (x - mean) / static_cast<double>(k);
  }
  return mean;
}

ShellCondition energy_condition_c(const Trajectory& trajectory, double e1, double e2, double start) {
  if (!(e1 <= e2)) throw std::invalid_argument("energy_condition_c: need E1 <= E2");
  const auto& m = trajectory.meta;
  ShellCondition c;
  double sum = 0.0;
  for (const auto& r : trajectory.records) {
    if (r.t < start) continue;
    ++c.samples;
    const double h = std::sqrt(r.h12sq);
    if (h < e1 || h > e2) continue;
    ++c.in_shell;
    sum += m.gamma * r.h12sq + m.nu * r.gradsq - r.inject;
  }
  c.empty = c.in_shell == 0;
  c.value = c.samples > 0 ? sum / static_cast<double>(c.samples) : 0.0;
  return c;
}

BalanceDefect dissipation_balance_defect(const Trajectory& trajectory, double start) {
  const auto& m = trajectory.meta;
  TimeAverage defect(start);
  TimeAverage grad(start);
  const TrajectoryRecord* first = nullptr;
  for (const auto& r : trajectory.records) {
    if (r.t < start) continue;
    if (!first) first = &r;
    defect.add(r.t, m.gamma * r.h12sq - r.inject);
    grad.add(r.t, r.gradsq);
  }
  if (defect.samples() < 2) throw std::invalid_argument("dissipation_balance_defect: fewer than two samples");
  const auto& last = trajectory.records.back();
  BalanceDefect b;
  b.defect = defect.mean();
  b.viscous = m.nu * grad.mean();
  b.drift = (last.l2sq - first->l2sq) / (2.0 * (last.t - first->t));
  b.identity_gap = b.defect + b.viscous + b.drift;
  return b;
}

IKTerms ik_terms(const SpectralField& theta, double eps, double nu, double gamma, const SpectralField* forcing) {
  const auto jt = mollify(theta, eps);
  auto linear = gamma * damping(theta);
  if (forcing) linear -= *forcing;
  IKTerms t;
  t.i = inner(jt, mollify(linear, eps));
  t.k_direct = inner(jt, mollify(sqg_transport(theta), eps));
  t.k_flux = eps > 0.0 ? flux_divergence_pairing(jt, theta, eps) : t.k_direct;
  t.v = nu * inner(jt, mollify(-laplacian(theta), eps));
  return t;
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["window"] = window;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["verdict"] = pass ? "pass" : "fail";
  return j.dump();
}

}  // namespace sqglab
