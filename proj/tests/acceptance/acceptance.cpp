// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// listed criteria run (criterion 9 reuses the runs of criterion 8).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sqglab/diagnostics.hpp"
#include "sqglab/experiments.hpp"
#include "sqglab/generators.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"
#include "sqglab/statistics.hpp"

using namespace sqglab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverConfig sqg_config(const GridPtr& g, double nu, double gamma, double dt, double t_end) {
  SolverConfig c;
  c.equation = Equation::SQG;
  c.grid = g;
  c.nu = nu;
  c.gamma = gamma;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

SolverConfig nse_config(const GridPtr& g, const VelocityField& f, double nu, double dt, double t_end) {
  SolverConfig c;
  c.equation = Equation::NSE;
  c.grid = g;
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.sample_stride = 10;
  c.velocity_forcing = f;
  return c;
}

Verdict exact_kolmogorov_law() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = Grid::make(128);
  KolmogorovSweepSpec s;
  // ||f|| = 0.01 keeps |u_f| near 1 at nu = 0.01, so no CFL substeps are needed.
  s.base = nse_config(grid, shear_velocity(grid, 1, 0.01), 0.1, 1e-2, 10.0);
  s.lambda = 1.0;
  s.nus = {0.1, 0.01};
  const auto r = kolmogorov_divergence(s);
  double worst_law = 0.0, worst_steady = 0.0;
  bool ok = true;
  for (const auto& e : r.entries) {
    ok = ok && !e.excluded && !e.departure_time && e.relative_error && *e.relative_error < 1e-6 &&
         e.max_steady_residual < 1e-8;
    worst_law = std::max(worst_law, e.relative_error.value_or(1.0));
    worst_steady = std::max(worst_steady, e.max_steady_residual);
  }
  const double secs = seconds_since(start);
  ok = ok && secs < 60.0;
  return {ok, "max |eps nu lambda / ||f||^2 - 1| = " + num(worst_law) + ", max steady residual = " +
                  num(worst_steady) + ", exponent = " + num(r.exponent.value_or(0.0)) + ", " + num(secs) + " s"};
}

Verdict steady_euler_construction() {
  const auto k = kolmogorov_force(Grid::make(64), {1, 2});
  const bool ok = !k.degenerate && k.eigen_residual < 1e-10 && std::abs(k.lambda - 5.0) < 1e-12;
  return {ok, "||Af - 5f|| / ||f|| = " + num(k.eigen_residual) + ", lambda = " + num(k.lambda)};
}

Verdict identity_suite() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = Grid::make(64);
  double idb = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) idb = std::max(idb, stokes_identity_residual(random_velocity(grid, 100 + s, 12.0)));

  SpectralField c(grid);
  c.add_wave(1, 0, 1.0, 0.0);
  const auto d = cordoba_density(c).density;
  double cos_dev = 0.0;
  for (double v : d.values) cos_dev = std::max(cos_dev, std::abs(v - 1.0));
  double min_d = 0.0;
  bool resolved = true;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto r = cordoba_density(random_field(grid, 200 + s, 12.0, -1.0));
    resolved = resolved && !r.under_resolved;
    min_d = std::min(min_d, *std::min_element(r.density.values.begin(), r.density.values.end()));
  }

  double commut = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto phi = random_field(grid, 300 + s, 10.0, -1.0);
    auto theta = random_field(grid, 400 + s, 10.0, -1.0);
    phi = (1.0 / std::sqrt(l2_norm_sq(phi))) * phi;
    theta = (1.0 / std::sqrt(l2_norm_sq(theta))) * theta;
    commut = std::max(commut, commutator_identity(phi, theta).residual);
  }

  const auto theta = random_field(grid, 500, 8.0, -1.0);
  const double r8 = flux_identity_residual(theta, 0.3, 8);
  const double r16 = flux_identity_residual(theta, 0.3, 16);
  const double r32 = flux_identity_residual(theta, 0.3, 32);
  const double reduction = std::min(r8 / r16, r16 / r32);

  const double secs = seconds_since(start);
  const bool ok = idb < 1e-8 && cos_dev < 1e-10 && min_d >= -1e-8 && resolved && commut < 1e-8 && reduction >= 4.0 &&
                  secs < 120.0;
  return {ok, "idb " + num(idb) + ", |D[cos x1] - 1| " + num(cos_dev) + ", min D " + num(min_d) + ", commutator " +
                  num(commut) + ", flux reduction per doubling " + num(reduction) + ", " + num(secs) + " s"};
}

double balance_ratio(const GridPtr& grid, double dt, double* injected) {
  auto c = sqg_config(grid, 1e-2, 0.5, dt, 2.0);
  c.scalar_forcing = default_sqg_forcing(grid, 3);
  const auto run = simulate_sqg(c, 0.5 * random_field(grid, 800, 10.0, -1.5));
  *injected = std::abs(run.trajectory.totals.injected);
  return run.trajectory.totals.residual;
}

Verdict energy_balance() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = Grid::make(64);
  double inj_coarse = 0.0, inj_fine = 0.0;
  const double coarse = balance_ratio(grid, 2e-3, &inj_coarse);
  const double fine = balance_ratio(grid, 1e-3, &inj_fine);
  const double rel = fine / inj_fine;
  const double order = coarse / fine;
  const double secs = seconds_since(start);
  return {rel < 1e-5 && order >= 3.5 && secs < 120.0,
          "residual / injected = " + num(rel) + ", reduction under dt halving = " + num(order) + ", " + num(secs) + " s"};
}

Verdict maximum_principles() {
  const auto grid = Grid::make(64);
  struct Case {
    std::string name;
    bool zero_initial;
    bool unforced;
    std::uint64_t seed;
  };
  const std::vector<Case> cases{{"theta0=0", true, false, 1},
                                {"f=0", false, true, 2},
                                {"seed 3", false, false, 3},
                                {"seed 4", false, false, 4},
                                {"seed 5", false, false, 5}};
  double worst = 0.0;
  bool ok = true;
  for (const auto& k : cases) {
    auto c = sqg_config(grid, 5e-3, 0.5, 5e-3, 4.0);
    if (!k.unforced) c.scalar_forcing = default_sqg_forcing(grid, k.seed);
    const auto theta0 = k.zero_initial ? SpectralField(grid) : 0.5 * random_field(grid, 900 + k.seed, 6.0, -1.5);
    SimulationOptions opts;
    opts.oversample = 2;
    const auto env = support_envelope(simulate_sqg(c, theta0, opts).trajectory);
    worst = std::max({worst, env.worst_l2_excess, env.worst_linf_excess});
    ok = ok && !env.violated && env.worst_l2_excess <= 1e-6 && env.worst_linf_excess <= 1e-6;
  }
  return {ok, "5 runs, worst envelope excess = " + num(worst)};
}

Verdict delta_decay() {
  const auto grid = Grid::make(64);
  const auto k = kolmogorov_force(grid, {1, 2});
  const auto c = nse_config(grid, k.f, 0.05, 5e-3, 10.0);
  const auto uf = kolmogorov_steady_state(k.f, c.nu, k.lambda);
  const std::vector<VelocityField> starts{0.5 * k.f, uf + shear_velocity(grid, 1, 0.5), uf + shear_velocity(grid, 3, 0.5)};
  bool ok = true;
  std::string detail;
  for (const auto& u0 : starts) {
    const auto rep = delta_decay_study(c, u0, k.lambda, 1e-8, 1e-6);
    ok = ok && rep.pass;
    detail += (detail.empty() ? "" : "; ") + std::string("delta0 ") + num(rep.delta0) + " excess+ " +
              num(rep.max_excess_plus) + " excess env " + num(rep.max_excess_envelope);
  }
  return {ok, detail};
}

StationarityReport telescoping_run(const GridPtr& grid, double dt, double t_end, double gamma, std::uint64_t seed) {
  auto c = sqg_config(grid, 0.02, gamma, dt, t_end);
  c.scalar_forcing = default_sqg_forcing(grid, seed);
  StationarityAccumulator acc(CylindricalFunctional::quadratic(grid, 0.2), c.nu, c.gamma, c.scalar_forcing);
  SimulationOptions opts;
  opts.on_sqg_step = [&](const SqgState& s) { acc.add(s.t, s.field); };
  simulate_sqg(c, 0.5 * random_field(grid, seed + 50, 6.0, -1.5), opts);
  return acc.report();
}

Verdict stationarity_telescoping() {
  const auto grid = Grid::make(32);
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed : {5, 6, 7}) {
    const auto r = telescoping_run(grid, 1e-3, 2.0, 0.5, seed);
    const double rel = std::abs(r.defect) / r.max_abs_psi;
    worst = std::max(worst, rel);
    ok = ok && rel < 1e-6;
  }
  // Damping strong enough that the state is steady well before T.
  const auto a = telescoping_run(grid, 5e-3, 10.0, 2.0, 9);
  const auto b = telescoping_run(grid, 5e-3, 20.0, 2.0, 9);
  const double ratio = std::abs(b.residual) / std::abs(a.residual);
  ok = ok && ratio >= 0.4 && ratio <= 0.6;
  return {ok, "max |defect| / max|Psi| = " + num(worst) + ", residual(2T) / residual(T) = " + num(ratio)};
}

std::optional<SweepResult> sweep_cache;

const SweepResult& default_sweep() {
  if (!sweep_cache) {
    const auto grid = Grid::make(256);
    SqgSweepSpec s;
    s.base = sqg_config(grid, 1e-2, 1.0, 1e-2, 200.0);
    s.base.sample_stride = 10;
    s.base.scalar_forcing = default_sqg_forcing(grid, 0);
    s.nus = {1e-2, 1e-3, 1e-4};
    s.discard_fraction = 0.2;
    s.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    sweep_cache = sqg_nu_sweep(s);
  }
  return *sweep_cache;
}

Verdict main_theorem_trend() {
  const auto start = std::chrono::steady_clock::now();
  const auto& r = default_sweep();
  const double secs = seconds_since(start);
  bool all_converged = r.entries.size() == 3;
  std::string eps;
  for (const auto& e : r.entries) {
    all_converged = all_converged && e.converged && !e.excluded;
    eps += (eps.empty() ? "" : ", ") + num(e.epsilon) + " (defect " + num(e.defect) + ")";
  }
  const bool halved = r.last_over_first && *r.last_over_first < 0.5;
  const bool ok = all_converged && r.epsilon_strictly_decreasing && halved && r.defect_magnitude_decreasing &&
                  secs <= 1800.0;
  return {ok, "eps(nu) = " + eps + ", last/first " + num(r.last_over_first.value_or(0.0)) + ", all converged " +
                  (all_converged ? "yes" : "no") + ", " + num(secs) + " s"};
}

Verdict support_bounds() {
  const auto& r = default_sweep();
  bool ok = !r.entries.empty();
  double worst = 0.0;
  for (const auto& e : r.entries) {
    if (e.support_bound <= 0.0) {
      ok = false;
      continue;
    }
    // gamma = 1: gamma avg||theta||_{H^1/2}^2 against ||f||^2 / gamma
    const double ratio = e.avg_h12sq / e.support_bound;
    worst = std::max(worst, ratio);
    ok = ok && e.converged && ratio <= 1.01;
  }
  return {ok, "max gamma avg||theta||^2_H1/2 / (||f||^2/gamma) = " + num(worst)};
}

Verdict flux_scaling() {
  const auto grid = Grid::make(256);
  const std::vector<double> eps{0.05, 0.08, 0.12, 0.2, 0.3};
  std::vector<SpectralField> rough, smooth;
  for (std::uint64_t s = 0; s < 10; ++s) {
    rough.push_back(rough_field(grid, 1000 + s));
    smooth.push_back(random_field(grid, 2000 + s, 4.0));
  }
  const auto r = flux_scaling_study(rough, eps);
  const auto m = flux_scaling_study(smooth, eps);
  double min_smooth = m.fields.front().rho_slope;
  for (const auto& f : m.fields) min_smooth = std::min(min_smooth, f.rho_slope);
  const bool ok = r.median_rho_slope >= 0.45 && min_smooth >= 1.0;
  return {ok, "rough median rho slope " + num(r.median_rho_slope) + ", smooth min rho slope " + num(min_smooth)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"exact Kolmogorov law", exact_kolmogorov_law},
      {"steady Euler construction", steady_euler_construction},
      {"identity suite", identity_suite},
      {"energy balance", energy_balance},
      {"maximum principles", maximum_principles},
      {"delta decay", delta_decay},
      {"stationarity telescoping", stationarity_telescoping},
      {"vanishing dissipation trend", main_theorem_trend},
      {"support bounds", support_bounds},
      {"flux scaling", flux_scaling},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
