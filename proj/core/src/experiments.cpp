#include "sqglab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include <json.hpp>

#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"
#include "sqglab/statistics.hpp"

namespace sqglab {

namespace {

// Runs body(i) for i in [0, count) on up to `jobs` threads; rethrows the first
// exception after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string failure_reason(const NumericalFailure& e) {
  return std::string("numerical failure at t=") + std::to_string(e.time()) + ": " + e.what();
}

void check_nus(const std::vector<double>& nus) {
  if (nus.empty()) throw std::invalid_argument("sweep: empty nu list");
  for (std::size_t i = 0; i < nus.size(); ++i) {
    if (!(nus[i] > 0.0)) throw std::invalid_argument("sweep: every nu must be positive");
    if (i > 0 && !(nus[i] < nus[i - 1])) throw std::invalid_argument("sweep: nus must be strictly decreasing");
  }
}

void fill_trends(SweepResult& r) {
  std::vector<const SweepEntry*> in;
  for (const auto& e : r.entries) {
    if (!e.excluded) in.push_back(&e);
  }
  if (in.size() < 2) return;
  r.epsilon_strictly_decreasing = true;
  r.defect_magnitude_decreasing = true;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (!(in[i]->epsilon < in[i - 1]->epsilon)) r.epsilon_strictly_decreasing = false;
    if (!(std::abs(in[i]->defect) < std::abs(in[i - 1]->defect))) r.defect_magnitude_decreasing = false;
  }
  if (in.front()->epsilon > 0.0) r.last_over_first = in.back()->epsilon / in.front()->epsilon;
  std::vector<double> x, y;
  for (const auto* e : in) {
    if (e->epsilon > 0.0) {
      x.push_back(e->nu);
      y.push_back(e->epsilon);
    }
  }
  if (x.size() >= 2) r.exponent = fit_loglog(x, y).slope;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog: need at least two paired points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_loglog: data must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog: x values must not all coincide");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  return f;
}

std::size_t SweepResult::included() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) { return !e.excluded; }));
}

std::string SweepResult::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  auto& arr = j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json o;
    o["nu"] = e.nu;
    o["epsilon"] = e.epsilon;
    o["limsup"] = e.limsup;
    o["window_start"] = e.window_start;
    o["horizon"] = e.horizon;
    o["converged"] = e.converged;
    o["excluded"] = e.excluded;
    o["reason"] = e.reason;
    if (kind == "sqg") {
      o["defect"] = e.defect;
      o["avg_h12sq"] = e.avg_h12sq;
      o["support_bound"] = e.support_bound;
    } else {
      o["predicted"] = optional_json(e.predicted);
      o["relative_error"] = optional_json(e.relative_error);
      o["max_steady_residual"] = e.max_steady_residual;
      o["departure_time"] = optional_json(e.departure_time);
    }
    arr.push_back(std::move(o));
  }
  j["included"] = included();
  j["epsilon_strictly_decreasing"] = epsilon_strictly_decreasing;
  j["last_over_first"] = optional_json(last_over_first);
  if (kind == "sqg") j["defect_magnitude_decreasing"] = defect_magnitude_decreasing;
  j["exponent"] = optional_json(exponent);
  return j.dump(2);
}

SweepResult sqg_nu_sweep(const SqgSweepSpec& spec) {
  check_nus(spec.nus);
  if (spec.base.equation != Equation::SQG) throw std::invalid_argument("sqg_nu_sweep: base config is not SQG");
  SweepResult result;
  result.kind = "sqg";
  result.entries.resize(spec.nus.size());
  result.trajectories.resize(spec.nus.size());
  parallel_for(spec.nus.size(), spec.jobs, [&](std::size_t i) {
    auto& e = result.entries[i];
    e.nu = spec.nus[i];
    auto config = spec.base;
    config.nu = e.nu;
    SimulationOptions opts;
    opts.oversample = spec.oversample;
    Trajectory traj;
    try {
      traj = simulate_sqg(config, spec.initial ? *spec.initial : SpectralField(config.grid), opts).trajectory;
    } catch (const NumericalFailure& ex) {
      e.excluded = true;
      e.reason = failure_reason(ex);
      return;
    }
    const double t0 = window_start(traj, spec.discard_fraction);
    std::vector<double> t, g;
    for (const auto& r : traj.records) {
      if (r.t >= t0) {
        t.push_back(r.t);
        g.push_back(r.gradsq);
      }
    }
    if (t.size() < 10) {
      e.excluded = true;
      e.reason = "fewer than 10 samples in the averaging window";
      result.trajectories[i] = std::move(traj);
      return;
    }
    const auto eps = epsilon_estimate(traj, e.nu, t0);
    e.epsilon = eps.value;
    e.limsup = eps.limsup_proxy;
    e.window_start = t0;
    e.horizon = eps.horizon;
    e.defect = dissipation_balance_defect(traj, t0).defect;
    e.avg_h12sq = time_average(traj, &TrajectoryRecord::h12sq, t0);
    if (config.gamma > 0.0) {
      const double b = traj.meta.forcing_l2 / config.gamma;
      e.support_bound = b * b;
    }
    e.converged = average_convergence(t, g).converged;
    if (!e.converged) {
      e.excluded = true;
      e.reason = "averaging window not converged";
    }
    result.trajectories[i] = std::move(traj);
  });
  fill_trends(result);
  return result;
}

VelocityField kolmogorov_steady_state(const VelocityField& f, double nu, double lambda) {
  if (!(nu > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("kolmogorov_steady_state: nu and lambda must be positive");
  return (1.0 / (nu * lambda)) * f;
}

SweepResult kolmogorov_divergence(const KolmogorovSweepSpec& spec) {
  check_nus(spec.nus);
  if (spec.base.equation != Equation::NSE || !spec.base.velocity_forcing) {
    throw std::invalid_argument("kolmogorov_divergence: base config must be NSE with forcing");
  }
  const auto& f = *spec.base.velocity_forcing;
  const double fsq = l2_norm_sq(f);
  SweepResult result;
  result.kind = "kolmogorov";
  result.entries.resize(spec.nus.size());
  result.trajectories.resize(spec.nus.size());
  parallel_for(spec.nus.size(), spec.jobs, [&](std::size_t i) {
    auto& e = result.entries[i];
    e.nu = spec.nus[i];
    auto config = spec.base;
    config.nu = e.nu;
    const auto uf = kolmogorov_steady_state(f, e.nu, spec.lambda);
    const double uf_norm = std::sqrt(l2_norm_sq(uf));
    SimulationOptions opts;
    opts.lambda = spec.lambda;
    opts.on_nse_step = [&](const NseState& s) {
      const double r = std::sqrt(l2_norm_sq(s.field - uf)) / uf_norm;
      e.max_steady_residual = std::max(e.max_steady_residual, r);
      if (!e.departure_time && !(r < spec.steady_tol)) e.departure_time = s.t;
    };
    Trajectory traj;
    try {
      traj = simulate_nse(config, uf, opts).trajectory;
    } catch (const NumericalFailure& ex) {
      e.excluded = true;
      e.reason = failure_reason(ex);
      return;
    }
    const double t0 = window_start(traj, spec.discard_fraction);
    const auto eps = epsilon_estimate(traj, e.nu, t0);
    e.epsilon = eps.value;
    e.limsup = eps.limsup_proxy;
    e.window_start = t0;
    e.horizon = eps.horizon;
    e.predicted = fsq / (e.nu * spec.lambda);
    e.relative_error = std::abs(e.epsilon / *e.predicted - 1.0);
    e.converged = !e.departure_time;
    if (e.departure_time) {
      e.reason = "departed from the steady state at t=" + std::to_string(*e.departure_time);
    } else if (*e.relative_error > spec.law_tol) {
      e.reason = "epsilon differs from the steady law";
    }
    result.trajectories[i] = std::move(traj);
  });
  fill_trends(result);
  return result;
}

DeltaDecayReport delta_decay_study(const SolverConfig& config, const VelocityField& u0, double lambda, double tol_plus,
                                   double tol_envelope) {
  if (config.equation != Equation::NSE) throw std::invalid_argument("delta_decay_study: config is not NSE");
  DeltaDecayReport rep;
  SimulationOptions opts;
  opts.lambda = lambda;
  opts.on_nse_step = [&](const NseState& s) {
    const double l2 = l2_norm_sq(s.field);
    const double g = h1_seminorm_sq(s.field);
    rep.t.push_back(s.t);
    rep.delta.push_back(g - lambda * l2);
    rep.mu.push_back(l2 > 0.0 ? g / l2 : 0.0);
  };
  auto quiet = config;
  quiet.sample_stride = std::max<long>(1, std::lround(config.t_end / config.dt));
  simulate_nse(quiet, u0, opts);
  rep.delta0 = rep.delta.front();
  const double plus = std::max(rep.delta0, 0.0);
  double integral = 0.0;
  rep.bound.reserve(rep.t.size());
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (i > 0) integral += 0.5 * (rep.t[i] - rep.t[i - 1]) * (rep.mu[i] + rep.mu[i - 1]);
    rep.bound.push_back(rep.delta0 * std::exp(-2.0 * config.nu * integral));
    rep.max_excess_plus = std::max(rep.max_excess_plus, rep.delta[i] - plus);
    if (rep.delta0 > 0.0) rep.max_excess_envelope = std::max(rep.max_excess_envelope, rep.delta[i] - rep.bound[i]);
  }
  rep.pass = rep.max_excess_plus <= tol_plus && rep.max_excess_envelope <= tol_envelope;
  return rep;
}

FluxScalingReport flux_scaling_study(const std::vector<SpectralField>& fields, const std::vector<double>& eps, double z1,
                                     double z2) {
  if (fields.empty()) throw std::invalid_argument("flux_scaling_study: no fields");
  const double zn = std::hypot(z1, z2);
  if (!(zn > 0.0)) throw std::invalid_argument("flux_scaling_study: shift direction must be nonzero");
  const double h = 2.0 * std::numbers::pi / fields.front().grid().n();
  FluxScalingReport rep;
  std::vector<double> kept;
  for (double e : eps) (e >= 2.0 * h ? kept : rep.excluded_eps).push_back(e);
  if (kept.size() < 2) throw std::invalid_argument("flux_scaling_study: fewer than two resolved eps values");
  std::vector<double> rho_slopes, inc_slopes;
  for (const auto& theta : fields) {
    FluxScalingEntry entry;
    entry.eps = kept;
    const double h12 = std::sqrt(h12_norm_sq(theta));
    for (double e : kept) {
      entry.rho_norm.push_back(flux_rho_norm(theta, e));
      const double inc = increment_norm(theta, e * z1, e * z2);
      entry.increment_norm.push_back(inc);
      if (h12 > 0.0) entry.increment_constant = std::max(entry.increment_constant, inc / (std::sqrt(e * zn) * h12));
    }
    entry.rho_slope = fit_loglog(kept, entry.rho_norm).slope;
    entry.increment_slope = fit_loglog(kept, entry.increment_norm).slope;
    rho_slopes.push_back(entry.rho_slope);
    inc_slopes.push_back(entry.increment_slope);
    rep.fields.push_back(std::move(entry));
  }
  rep.median_rho_slope = median(rho_slopes);
  rep.median_increment_slope = median(inc_slopes);
  return rep;
}

}  // namespace sqglab
