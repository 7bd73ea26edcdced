#include "sqglab/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "sqglab/diagnostics.hpp"
#include "sqglab/generators.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

namespace sqglab::cli {

namespace {

CheckReport below(std::string check, std::string window, double value, double tol) {
  return {std::move(check), std::move(window), value, tol, value <= tol};
}

CheckReport at_least(std::string check, std::string window, double value, double tol) {
  return {std::move(check), std::move(window), value, tol, value >= tol};
}

double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

SolverConfig sqg(const GridPtr& grid, double nu, double gamma, double dt, double t_end) {
  SolverConfig c;
  c.equation = Equation::SQG;
  c.grid = grid;
  c.nu = nu;
  c.gamma = gamma;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

std::vector<CheckReport> operators_suite() {
  std::vector<CheckReport> out;
  const auto grid = Grid::make(32);
  const std::string w = "n=32, 10 seeded fields";
  double parseval = 0.0, riesz = 0.0, isometry = 0.0, leray = 0.0, semigroup = 0.0, contract = 0.0, mass = 0.0;
  for (int s = 0; s < 10; ++s) {
    const auto theta = random_field(grid, 100 + s, 8.0, -1.0);
    const auto phys = theta.to_physical();
    double ms = 0.0;
    for (double v : phys.values) ms += v * v;
    ms /= static_cast<double>(phys.values.size());
    const double l2 = l2_norm_sq(theta);
    parseval = std::max(parseval, std::abs(ms - l2) / l2);
    const auto u = riesz_perp(theta);
    riesz = std::max(riesz, relative_divergence(u));
    isometry = std::max(isometry, std::abs(l2_norm_sq(u) - l2) / l2);
    const VectorField v{random_field(grid, 200 + s, 8.0), random_field(grid, 300 + s, 8.0)};
    const auto p = leray_project(v);
    leray = std::max(leray, std::sqrt(l2_norm_sq(leray_project(p) - p) / l2_norm_sq(p)));
    const auto a = lambda_pow(lambda_pow(theta, 0.7), -0.3);
    semigroup = std::max(semigroup, max_abs(a - lambda_pow(theta, 0.4)) / max_abs(theta));
    auto shifted = theta;
    shifted.set_mode(0, 0, 1.0);
    const auto j = mollify(shifted, 0.3);
    mass = std::max(mass, std::abs(j.mean() - 1.0));
    contract = std::max(contract, l2_norm_sq(j) - l2_norm_sq(shifted));
  }
  out.push_back(below("parseval", w, parseval, 1e-12));
  out.push_back(below("riesz_divergence_free", w, riesz, 1e-13));
  out.push_back(below("riesz_isometry", w, isometry, 1e-12));
  out.push_back(below("leray_idempotent", w, leray, 1e-13));
  out.push_back(below("lambda_semigroup", w, semigroup, 1e-12));
  out.push_back(below("mollifier_unit_mass", w, mass, 1e-14));
  out.push_back(below("mollifier_contractive", w, contract, 0.0));
  SpectralField c(grid);
  c.add_wave(1, 0, 1.0, 0.0);
  const auto d = cordoba_density(c).density;
  double dev = 0.0;
  for (double v : d.values) dev = std::max(dev, std::abs(v - 1.0));
  out.push_back(below("cordoba_cos_x1", "n=32", dev, 1e-10));
  return out;
}

std::vector<CheckReport> identities_suite() {
  std::vector<CheckReport> out;
  const auto grid = Grid::make(32);
  double stokes = 0.0, pos = 0.0, commut = 0.0, transport = 0.0;
  for (int s = 0; s < 10; ++s) {
    stokes = std::max(stokes, stokes_identity_residual(random_velocity(grid, 400 + s, 8.0)));
    const auto phi = random_field(grid, 500 + s, 8.0, -1.0);
    pos = std::max(pos, -cordoba_density(phi).density.min());
    const auto theta = random_field(grid, 600 + s, 8.0, -1.0);
    const auto ci = commutator_identity(phi, theta);
    commut = std::max(commut, ci.residual / std::max(1.0, std::abs(ci.flux_side)));
    transport = std::max(transport, std::abs(inner(theta, sqg_transport(theta))) /
                                        std::sqrt(l2_norm_sq(theta) * l2_norm_sq(sqg_transport(theta))));
  }
  const std::string w = "n=32, 10 seeded fields";
  out.push_back(below("stokes_identity", w, stokes, 1e-8));
  out.push_back(below("cordoba_positivity", w, pos, 1e-8));
  out.push_back(below("commutator_identity", w, commut, 1e-8));
  out.push_back(below("transport_orthogonality", w, transport, 1e-12));
  const auto theta = random_field(grid, 700, 6.0, -1.0);
  const double r8 = flux_identity_residual(theta, 0.3, 8);
  const double r16 = flux_identity_residual(theta, 0.3, 16);
  const double r32 = flux_identity_residual(theta, 0.3, 32);
  out.push_back(at_least("flux_identity_convergence", "n=32, eps=0.3, 8/16/32 nodes", std::min(r8 / r16, r16 / r32), 4.0));
  const auto k = kolmogorov_force(Grid::make(64), {1, 2});
  out.push_back(below("kolmogorov_eigenfunction", "n=64, shells 1 and 4", k.eigen_residual, 1e-10));
  return out;
}

std::vector<CheckReport> balances_suite() {
  std::vector<CheckReport> out;
  const auto grid = Grid::make(32);
  double res[2], injected = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto c = sqg(grid, 0.01, 0.5, i == 0 ? 2e-3 : 1e-3, 2.0);
    c.scalar_forcing = default_sqg_forcing(grid, 3);
    const auto run = simulate_sqg(c, 0.5 * random_field(grid, 800, 6.0, -1.5));
    res[i] = run.trajectory.totals.residual;
    injected = std::abs(run.trajectory.totals.injected);
  }
  out.push_back(below("sqg_energy_balance", "n=32, T=2, dt=1e-3", res[1] / injected, 1e-5));
  out.push_back(at_least("sqg_balance_order", "n=32, dt 2e-3 -> 1e-3", res[0] / res[1], 3.5));

  const auto k = kolmogorov_force(grid, {1, 2});
  SolverConfig n;
  n.equation = Equation::NSE;
  n.grid = grid;
  n.nu = 0.1;
  n.dt = 1e-2;
  n.t_end = 2.0;
  n.velocity_forcing = k.f;
  const auto run = simulate_nse(n, (1.0 / (n.nu * k.lambda)) * k.f);
  const double eps = epsilon_estimate(run.trajectory, n.nu, 0.0).value;
  const double predicted = l2_norm_sq(k.f) / (n.nu * k.lambda);
  out.push_back(below("kolmogorov_law", "n=32, nu=0.1, T=2", std::abs(eps / predicted - 1.0), 1e-6));

  auto c = sqg(grid, 0.01, 0.5, 5e-3, 4.0);
  c.scalar_forcing = default_sqg_forcing(grid, 13);
  SimulationOptions opts;
  opts.oversample = 2;
  const auto env = support_envelope(simulate_sqg(c, SpectralField(grid), opts).trajectory);
  out.push_back(below("maximum_principle", "n=32, theta0=0, T=4",
                      std::max(env.worst_l2_excess, env.worst_linf_excess), 1e-6));
  return out;
}

std::vector<CheckReport> statistics_suite() {
  std::vector<CheckReport> out;
  const auto grid = Grid::make(32);
  const auto f = default_sqg_forcing(grid, 5);
  const auto q = CylindricalFunctional::quadratic(grid, 0.2);
  double recomb = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto d = decompose_F(random_field(grid, 900 + s, 10.0, -1.0), q, 0.02, 0.5, &f);
    recomb = std::max(recomb, std::abs(d.combined - d.direct) / (std::abs(d.f1) + 0.02 * std::abs(d.f2) + std::abs(d.f3)));
  }
  out.push_back(below("f_recombination", "n=32, 5 seeded fields", recomb, 1e-10));

  auto c = sqg(grid, 0.02, 0.5, 1e-3, 2.0);
  c.scalar_forcing = f;
  StationarityAccumulator acc(q, c.nu, c.gamma, f);
  SimulationOptions opts;
  opts.on_sqg_step = [&](const SqgState& s) { acc.add(s.t, s.field); };
  const auto run = simulate_sqg(c, 0.5 * random_field(grid, 950, 6.0, -1.5), opts);
  const auto r = acc.report();
  out.push_back(below("stationarity_telescoping", "n=32, T=2, dt=1e-3", std::abs(r.defect) / r.max_abs_psi, 1e-6));
  const auto b = dissipation_balance_defect(run.trajectory, 0.4);
  out.push_back(below("balance_defect_identity", "[0.4, 2]",
                      std::abs(b.identity_gap) / (std::abs(b.defect) + b.viscous + std::abs(b.drift)), 1e-5));
  EmpiricalMeasure m;
  for (int s = 0; s < 5; ++s) m.add(random_field(grid, 960 + s, 4.0));
  out.push_back(below("empirical_constant", "5 samples",
                      std::abs(m.integrate([](const SpectralField&) { return 0.7; }) - 0.7), 0.0));
  return out;
}

const std::map<std::string, std::function<std::vector<CheckReport>()>>& suites() {
  static const std::map<std::string, std::function<std::vector<CheckReport>()>> m{
      {"operators", operators_suite},
      {"identities", identities_suite},
      {"balances", balances_suite},
      {"statistics", statistics_suite}};
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"operators", "identities", "balances", "statistics"};
  return names;
}

std::vector<CheckReport> run_suite(const std::string& name) {
  if (name == "all") {
    std::vector<CheckReport> out;
    for (const auto& n : suite_names()) {
      auto part = suites().at(n)();
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  const auto it = suites().find(name);
  if (it == suites().end()) throw std::invalid_argument("unknown suite \"" + name + "\"");
  return it->second();
}

}  // namespace sqglab::cli
