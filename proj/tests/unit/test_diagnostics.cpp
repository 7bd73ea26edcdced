#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gen.hpp"
#include "sqglab/diagnostics.hpp"
#include "sqglab/generators.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

using namespace sqglab;
using sqglab::testing::Gen;

namespace {

SpectralField cos_x1(const GridPtr& g, double a = 1.0) {
  SpectralField f(g);
  f.add_wave(1, 0, a, 0.0);
  return f;
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

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("records hold the initial, strided and final samples") {
    const auto grid = Grid::make(16);
    auto c = sqg_config(grid, 0.01, 0.2, 0.01, 0.25);
    c.sample_stride = 10;
    int calls = 0;
    SimulationOptions opts;
    opts.on_sqg_step = [&](const SqgState&) { ++calls; };
    const auto run = simulate_sqg(c, cos_x1(grid), opts);
    const auto t = run.trajectory.times();
    REQUIRE(t.size() == 4);
    CHECK(t[0] == 0.0);
    CHECK(t[1] == doctest::Approx(0.1));
    CHECK(t[2] == doctest::Approx(0.2));
    CHECK(t[3] == doctest::Approx(0.25));
    CHECK(calls == 26);
    CHECK(run.trajectory.totals.steps == 25);
    const auto& r = run.trajectory.records.front();
    CHECK(r.l2sq == doctest::Approx(0.5));
    CHECK(r.h12sq == doctest::Approx(1.0));
    CHECK(r.gradsq == doctest::Approx(0.5));
    CHECK(r.linf == doctest::Approx(1.0));
    CHECK_FALSE(r.delta.has_value());
  }

  TEST_CASE("time average of a constant is exact") {
    TimeAverage a(1.0);
    Gen g(301);
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
      t += g.uniform(0.01, 0.3);
      a.add(t, 0.3);
    }
    CHECK(a.mean() == 0.3);
    CHECK(a.variance() == 0.0);
  }

  TEST_CASE("time average is the trapezoid rule") {
    Gen g(303);
    for (int trial = 0; trial < 10; ++trial) {
      TimeAverage a;
      double t = 0.0, prev_t = 0.0, prev_v = 0.0, integral = 0.0;
      const int n = g.integer(2, 40);
      for (int i = 0; i < n; ++i) {
        const double v = g.normal();
        if (i > 0) {
          t += g.uniform(0.01, 1.0);
          integral += 0.5 * (t - prev_t) * (v + prev_v);
        }
        a.add(t, v);
        prev_t = t;
        prev_v = v;
      }
      CHECK(a.mean() == doctest::Approx(integral / t).epsilon(1e-12));
      CHECK(a.cesaro().size() == static_cast<std::size_t>(n - 1));
    }
  }

  TEST_CASE("epsilon of the zero solution is zero") {
    const auto grid = Grid::make(16);
    const auto run = simulate_sqg(sqg_config(grid, 0.01, 0.2, 0.01, 1.0), SpectralField(grid));
    const auto e = epsilon_estimate(run.trajectory, 0.01, 0.2);
    CHECK(e.value == 0.0);
    CHECK(e.limsup_proxy == 0.0);
    CHECK(e.horizon == doctest::Approx(0.8));
  }

  TEST_CASE("epsilon of a decaying eigenmode matches the analytic average") {
    const auto grid = Grid::make(16);
    const double gamma = 0.3, nu = 0.05, T = 2.0;
    const double r = 2.0 * gamma + nu;
    const auto run = simulate_sqg(sqg_config(grid, nu, gamma, 1e-3, T), cos_x1(grid));
    const auto e = epsilon_estimate(run.trajectory, nu, 0.0);
    // nu * (1/T) int_0^T (1/2) e^{-2 r t} dt
    const double exact = nu * 0.5 * (-std::expm1(-2.0 * r * T)) / (2.0 * r * T);
    CHECK(e.value == doctest::Approx(exact).epsilon(1e-6));
    CHECK(e.limsup_proxy >= e.value);
  }

  TEST_CASE("epsilon of steady Kolmogorov flow") {
    const auto grid = Grid::make(32);
    const double nu = 0.1;
    const auto k = kolmogorov_force(grid, {});
    SolverConfig c;
    c.equation = Equation::NSE;
    c.grid = grid;
    c.nu = nu;
    c.dt = 1e-3;
    c.t_end = 0.5;
    c.velocity_forcing = k.f;
    SimulationOptions opts;
    opts.lambda = k.lambda;
    const auto run = simulate_nse(c, (1.0 / (nu * k.lambda)) * k.f, opts);
    const auto e = epsilon_estimate(run.trajectory, nu, 0.0);
    const double fsq = l2_norm_sq(k.f);
    CHECK(e.value == doctest::Approx(fsq / (nu * k.lambda)).epsilon(1e-8));
    for (const auto& r : run.trajectory.records) {
      REQUIRE(r.delta.has_value());
      CHECK(std::abs(*r.delta) < 1e-8 * r.gradsq);
      CHECK(*r.mu == doctest::Approx(k.lambda).epsilon(1e-10));
    }
  }

  TEST_CASE("epsilon rejects an empty window") {
    const auto grid = Grid::make(16);
    const auto run = simulate_sqg(sqg_config(grid, 0.01, 0.2, 0.1, 0.3), cos_x1(grid));
    CHECK_THROWS_AS(epsilon_estimate(run.trajectory, 0.01, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_estimate(Trajectory{}, 0.01, 0.0), std::invalid_argument);
  }

  TEST_CASE("epsilon equals injection minus damping minus drift") {
    const auto grid = Grid::make(32);
    auto c = sqg_config(grid, 0.02, 0.4, 2e-3, 3.0);
    c.scalar_forcing = default_sqg_forcing(grid, 12);
    Gen g(305);
    const auto run = simulate_sqg(c, testing::gen_field(grid, g, 6, 1.5));
    const double t0 = window_start(run.trajectory, 0.2);
    const auto e = epsilon_estimate(run.trajectory, c.nu, t0);
    const double inj = time_average(run.trajectory, &TrajectoryRecord::inject, t0);
    const double damp = c.gamma * time_average(run.trajectory, &TrajectoryRecord::h12sq, t0);
    const TrajectoryRecord* first = nullptr;
    for (const auto& r : run.trajectory.records) {
      if (r.t >= t0) {
        first = &r;
        break;
      }
    }
    const auto& last = run.trajectory.records.back();
    const double drift = (last.l2sq - first->l2sq) / (2.0 * (last.t - first->t));
    CHECK(e.value == doctest::Approx(inj - damp - drift).epsilon(1e-5));
  }

  TEST_CASE("convergence verdicts") {
    std::vector<double> t, constant, wave, linear;
    const double a = 2.0, b = 0.7, w = 3.0;
    for (int i = 0; i <= 20000; ++i) {
      const double s = 0.01 * i;
      t.push_back(s);
      constant.push_back(1.5);
      wave.push_back(a + b * std::sin(w * s));
      linear.push_back(s);
    }
    const auto c = average_convergence(t, constant);
    CHECK(c.converged);
    CHECK(c.tail_oscillation == 0.0);
    CHECK(c.mean == 1.5);
    const auto s = average_convergence(t, wave);
    CHECK(s.converged);
    // Cesaro mean a + b (1 - cos w T) / (w T)
    const double T = t.back();
    CHECK(s.mean == doctest::Approx(a + b * (1.0 - std::cos(w * T)) / (w * T)).epsilon(1e-6));
    CHECK(s.tail_oscillation <= 2.0 * b / (w * 0.5 * T) + 1e-12);
    const auto l = average_convergence(t, linear);
    CHECK_FALSE(l.converged);
    CHECK(l.mean == doctest::Approx(0.5 * T));
    CHECK_THROWS_AS(average_convergence({0, 1, 2}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(average_convergence(t, {1.0}), std::invalid_argument);
  }

  TEST_CASE("short oscillating series is not converged") {
    std::vector<double> t, v;
    for (int i = 0; i <= 100; ++i) {
      t.push_back(0.01 * i);
      v.push_back(std::sin(2.0 * std::numbers::pi * 0.01 * i));
    }
    CHECK_FALSE(average_convergence(t, v).converged);
  }

  TEST_CASE("zero initial state stays inside the forcing envelope") {
    const auto grid = Grid::make(32);
    auto c = sqg_config(grid, 0.01, 0.5, 5e-3, 5.0);
    c.scalar_forcing = default_sqg_forcing(grid, 13);
    SimulationOptions opts;
    opts.oversample = 2;
    const auto run = simulate_sqg(c, SpectralField(grid), opts);
    const auto env = support_envelope(run.trajectory, 1.0);
    CHECK(env.bound_linf == doctest::Approx(run.trajectory.meta.forcing_linf / c.gamma));
    CHECK(env.max_linf <= env.bound_linf + 1e-6);
    CHECK(env.max_l2 <= env.bound_l2 + 1e-6);
    CHECK_FALSE(env.violated);
  }

  TEST_CASE("unforced envelopes decay from the initial maximum") {
    const auto grid = Grid::make(32);
    Gen g(307);
    const auto run = simulate_sqg(sqg_config(grid, 0.01, 0.5, 5e-3, 2.0), testing::gen_field(grid, g, 6, 1.5));
    const auto env = support_envelope(run.trajectory);
    CHECK(env.time_of_max_l2 == 0.0);
    CHECK(env.max_l2 == doctest::Approx(run.trajectory.meta.initial_l2));
    CHECK(env.max_linf == doctest::Approx(run.trajectory.meta.initial_linf));
    CHECK_FALSE(env.violated);
  }

  TEST_CASE("steady linear example has constant norms") {
    const auto grid = Grid::make(16);
    const double gamma = 0.3, nu = 0.02;
    auto c = sqg_config(grid, nu, gamma, 0.01, 1.0);
    c.scalar_forcing = cos_x1(grid, 2.0 * gamma + nu);
    const auto run = simulate_sqg(c, cos_x1(grid));
    const auto env = support_envelope(run.trajectory);
    CHECK(env.max_l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(env.max_linf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.avg_h12sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(env.violated);
    CHECK_FALSE(env.average_violated);
    auto undamped = run.trajectory;
    undamped.meta.gamma = 0.0;
    CHECK_THROWS_AS(support_envelope(undamped), std::invalid_argument);
  }

  TEST_CASE("mu stays at least one on a generic NSE run") {
    const auto grid = Grid::make(32);
    SolverConfig c;
    c.equation = Equation::NSE;
    c.grid = grid;
    c.nu = 0.02;
    c.dt = 5e-3;
    c.t_end = 1.0;
    const auto k = kolmogorov_force(grid, {1, 3});
    c.velocity_forcing = k.f;
    SimulationOptions opts;
    opts.lambda = k.lambda;
    Gen g(309);
    const auto run = simulate_nse(c, testing::gen_velocity(grid, g, 8, 1.0), opts);
    for (const auto& r : run.trajectory.records) {
      REQUIRE(r.mu.has_value());
      CHECK(*r.mu >= 1.0);
      CHECK(*r.delta == doctest::Approx(r.gradsq - k.lambda * r.l2sq));
    }
  }
}
