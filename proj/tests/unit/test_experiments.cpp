#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gen.hpp"
#include "sqglab/experiments.hpp"
#include "sqglab/generators.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

using namespace sqglab;
using sqglab::testing::Gen;

namespace {

SolverConfig sqg_base(const GridPtr& g, double gamma, double dt, double t_end) {
  SolverConfig c;
  c.equation = Equation::SQG;
  c.grid = g;
  c.gamma = gamma;
  c.dt = dt;
  c.t_end = t_end;
  c.sample_stride = 10;
  return c;
}

SolverConfig nse_base(const GridPtr& g, const VelocityField& f, double dt, double t_end) {
  SolverConfig c;
  c.equation = Equation::NSE;
  c.grid = g;
  c.dt = dt;
  c.t_end = t_end;
  c.sample_stride = 10;
  c.velocity_forcing = f;
  return c;
}

KolmogorovSweepSpec shear_sweep(const GridPtr& g, int k, double amplitude, std::vector<double> nus) {
  KolmogorovSweepSpec s;
  s.base = nse_base(g, shear_velocity(g, k, amplitude), 1e-2, 2.0);
  s.lambda = static_cast<double>(k * k);
  s.nus = std::move(nus);
  return s;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("log-log fit recovers a power law") {
    const std::vector<double> x{0.1, 0.2, 0.4, 0.8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.25));
    const auto f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-1.25).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.points == 4);
    CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog({2.0, 2.0}, {1.0, 3.0}), std::invalid_argument);
  }

  TEST_CASE("sweep rejects unordered or nonpositive viscosities") {
    SqgSweepSpec s;
    s.base = sqg_base(Grid::make(16), 1.0, 1e-2, 1.0);
    s.nus = {1e-3, 1e-2};
    CHECK_THROWS_AS(sqg_nu_sweep(s), std::invalid_argument);
    s.nus = {1e-2, 0.0};
    CHECK_THROWS_AS(sqg_nu_sweep(s), std::invalid_argument);
    s.nus = {};
    CHECK_THROWS_AS(sqg_nu_sweep(s), std::invalid_argument);
  }

  TEST_CASE("unforced sweep dissipates nothing after the transient") {
    const auto grid = Grid::make(16);
    SqgSweepSpec s;
    s.base = sqg_base(grid, 1.0, 1e-2, 40.0);
    s.initial = random_field(grid, 21, 5.0, -1.0);
    s.nus = {1e-2, 1e-3};
    s.discard_fraction = 0.5;
    const auto r = sqg_nu_sweep(s);
    REQUIRE(r.entries.size() == 2);
    for (const auto& e : r.entries) {
      CHECK_FALSE(e.excluded);
      CHECK(e.converged);
      CHECK(e.epsilon >= 0.0);
      CHECK(e.epsilon < 1e-20);
    }
  }

  TEST_CASE("runs with too few window samples are excluded but reported") {
    const auto grid = Grid::make(16);
    SqgSweepSpec s;
    s.base = sqg_base(grid, 1.0, 1e-2, 0.2);
    s.base.scalar_forcing = default_sqg_forcing(grid, 2);
    s.nus = {1e-2, 1e-3};
    const auto r = sqg_nu_sweep(s);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.included() == 0);
    for (const auto& e : r.entries) {
      CHECK(e.excluded);
      CHECK_FALSE(e.reason.empty());
    }
    CHECK_FALSE(r.exponent.has_value());
    CHECK(r.to_json().find("\"excluded\": true") != std::string::npos);
  }

  TEST_CASE("stronger damping lowers epsilon at every viscosity") {
    const auto grid = Grid::make(32);
    std::vector<double> eps[2];
    for (int i = 0; i < 2; ++i) {
      SqgSweepSpec s;
      s.base = sqg_base(grid, i == 0 ? 1.0 : 2.0, 1e-2, 20.0);
      s.base.scalar_forcing = default_sqg_forcing(grid, 5);
      s.nus = {1e-2, 3e-3};
      s.jobs = 2;
      const auto r = sqg_nu_sweep(s);
      for (const auto& e : r.entries) {
        REQUIRE_FALSE(e.excluded);
        CHECK(e.avg_h12sq <= 1.01 * e.support_bound);
        eps[i].push_back(e.epsilon);
      }
    }
    for (std::size_t k = 0; k < eps[0].size(); ++k) CHECK(eps[1][k] < eps[0][k]);
  }

  TEST_CASE("sweep is reproducible and independent of the job count") {
    const auto grid = Grid::make(16);
    SqgSweepSpec s;
    s.base = sqg_base(grid, 1.0, 1e-2, 5.0);
    s.base.scalar_forcing = default_sqg_forcing(grid, 8);
    s.initial = random_field(grid, 9, 4.0);
    s.nus = {2e-2, 1e-2, 5e-3};
    const auto a = sqg_nu_sweep(s);
    s.jobs = 3;
    const auto b = sqg_nu_sweep(s);
    CHECK(a.to_json() == b.to_json());
  }

  TEST_CASE("Kolmogorov law: halving nu doubles epsilon") {
    const auto grid = Grid::make(32);
    const auto r = kolmogorov_divergence(shear_sweep(grid, 1, 1.0, {0.1, 0.05}));
    REQUIRE(r.entries.size() == 2);
    for (const auto& e : r.entries) {
      CHECK(e.converged);
      CHECK_FALSE(e.departure_time.has_value());
      CHECK(e.max_steady_residual < 1e-8);
      REQUIRE(e.relative_error.has_value());
      CHECK(*e.relative_error < 1e-6);
      CHECK(e.epsilon == doctest::Approx(1.0 / e.nu).epsilon(1e-6));
    }
    CHECK(r.entries[1].epsilon / r.entries[0].epsilon == doctest::Approx(2.0).epsilon(1e-6));
    REQUIRE(r.exponent.has_value());
    CHECK(*r.exponent == doctest::Approx(-1.0).epsilon(1e-6));
  }

  TEST_CASE("Kolmogorov law: doubling the force quadruples epsilon") {
    const auto grid = Grid::make(32);
    const auto a = kolmogorov_divergence(shear_sweep(grid, 1, 1.0, {0.1}));
    const auto b = kolmogorov_divergence(shear_sweep(grid, 1, 2.0, {0.1}));
    CHECK(b.entries[0].epsilon / a.entries[0].epsilon == doctest::Approx(4.0).epsilon(1e-6));
  }

  TEST_CASE("Kolmogorov law: quadrupling lambda at fixed force quarters epsilon") {
    const auto grid = Grid::make(32);
    const auto a = kolmogorov_divergence(shear_sweep(grid, 1, 1.0, {0.1}));
    const auto b = kolmogorov_divergence(shear_sweep(grid, 2, 1.0, {0.1}));
    REQUIRE(b.entries[0].max_steady_residual < 1e-8);
    CHECK(b.entries[0].epsilon / a.entries[0].epsilon == doctest::Approx(0.25).epsilon(1e-6));
  }

  TEST_CASE("Kolmogorov law on the two-shell eigenforce") {
    const auto grid = Grid::make(32);
    const auto k = kolmogorov_force(grid, {1, 2});
    KolmogorovSweepSpec s;
    s.base = nse_base(grid, k.f, 1e-2, 1.0);
    s.lambda = k.lambda;
    s.nus = {0.2, 0.1};
    const auto r = kolmogorov_divergence(s);
    for (const auto& e : r.entries) {
      REQUIRE(e.predicted.has_value());
      CHECK(*e.predicted == doctest::Approx(l2_norm_sq(k.f) / (e.nu * 5.0)).epsilon(1e-12));
      if (!e.departure_time) CHECK(*e.relative_error < 1e-6);
    }
  }

  TEST_CASE("delta stays at zero from a multiple of the force") {
    const auto grid = Grid::make(32);
    const auto k = kolmogorov_force(grid, {1, 2});
    auto c = nse_base(grid, k.f, 1e-2, 2.0);
    c.nu = 0.05;
    const auto rep = delta_decay_study(c, 0.3 * k.f, k.lambda);
    CHECK(std::abs(rep.delta0) < 1e-10);
    for (double d : rep.delta) CHECK(d <= 1e-8);
    CHECK(rep.pass);
  }

  TEST_CASE("delta starting negative stays nonpositive") {
    const auto grid = Grid::make(32);
    const auto k = kolmogorov_force(grid, {1, 2});
    auto c = nse_base(grid, k.f, 1e-2, 2.0);
    c.nu = 0.05;
    // shell |k|^2 = 1 lies below lambda = 5
    const auto u0 = k.f + shear_velocity(grid, 1, 0.5);
    const auto rep = delta_decay_study(c, u0, k.lambda);
    CHECK(rep.delta0 == doctest::Approx((1.0 - 5.0) * 0.25).epsilon(1e-10));
    CHECK(rep.max_excess_plus <= 1e-8);
    CHECK(rep.pass);
  }

  TEST_CASE("positive delta sits under the exponential envelope") {
    const auto grid = Grid::make(32);
    const auto k = kolmogorov_force(grid, {1, 2});
    auto c = nse_base(grid, k.f, 1e-2, 2.0);
    c.nu = 0.05;
    // shell |k|^2 = 9 lies above lambda = 5
    const auto u0 = k.f + shear_velocity(grid, 3, 0.5);
    const auto rep = delta_decay_study(c, u0, k.lambda);
    CHECK(rep.delta0 == doctest::Approx((9.0 - 5.0) * 0.25).epsilon(1e-10));
    REQUIRE(rep.delta.size() == rep.bound.size());
    CHECK(rep.bound.front() == doctest::Approx(rep.delta0));
    CHECK(rep.bound.back() < rep.delta0);
    CHECK(rep.max_excess_envelope <= 1e-6);
    CHECK(rep.pass);
  }

  TEST_CASE("increment of cos x1 scales with slope one") {
    const auto grid = Grid::make(64);
    SpectralField theta(grid);
    theta.add_wave(1, 0, 1.0, 0.0);
    const std::vector<double> eps{0.025, 0.05, 0.2, 0.4};
    const auto rep = flux_scaling_study({theta}, eps);
    const double h = 2.0 * std::numbers::pi / 64.0;
    REQUIRE(rep.excluded_eps.size() == 2);
    for (double e : rep.excluded_eps) CHECK(e < 2.0 * h);
    const auto& entry = rep.fields.front();
    for (std::size_t i = 0; i < entry.eps.size(); ++i) {
      const double e = entry.eps[i];
      CHECK(entry.increment_norm[i] == doctest::Approx(std::sqrt(1.0 - std::cos(e))).epsilon(1e-12));
    }
    CHECK(entry.increment_slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(entry.increment_constant <= std::sqrt(2.0));
  }

  TEST_CASE("increment constant of random fields stays below sqrt 2") {
    Gen g(404);
    const auto grid = Grid::make(64);
    std::vector<SpectralField> fields;
    for (int i = 0; i < 6; ++i) fields.push_back(testing::gen_field(grid, g, 2 * g.integer(1, 10), g.uniform(0.0, 2.0)));
    const auto rep = flux_scaling_study(fields, {0.2, 0.4, 0.8, 1.6}, 0.6, 0.8);
    for (const auto& f : rep.fields) {
      CHECK(f.increment_constant > 0.0);
      CHECK(f.increment_constant <= std::sqrt(2.0));
    }
  }

  TEST_CASE("flux remainder slope: smooth fields at least one, rough fields at least 0.45") {
    const auto grid = Grid::make(64);
    SpectralField smooth(grid);
    smooth.add_wave(1, 0, 1.0, 0.0);
    smooth.add_wave(1, 2, 0.0, 0.5);
    const std::vector<double> eps{0.2, 0.3, 0.45, 0.7};
    CHECK(flux_scaling_study({smooth}, eps).median_rho_slope >= 1.0);

    std::vector<SpectralField> rough;
    for (std::uint64_t s = 0; s < 4; ++s) rough.push_back(rough_field(grid, 70 + s));
    CHECK(flux_scaling_study(rough, eps).median_rho_slope >= 0.45);
  }

  TEST_CASE("flux scaling needs two resolved widths") {
    const auto grid = Grid::make(16);
    CHECK_THROWS_AS(flux_scaling_study({random_field(grid, 1, 3.0)}, {0.1, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(flux_scaling_study({}, {0.9, 1.8}), std::invalid_argument);
  }
}
