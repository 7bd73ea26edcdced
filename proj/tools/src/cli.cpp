#include "sqglab/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqglab/cli/config.hpp"
#include "sqglab/cli/io.hpp"
#include "sqglab/cli/verify.hpp"
#include "sqglab/diagnostics.hpp"
#include "sqglab/experiments.hpp"
#include "sqglab/operators.hpp"
#include "sqglab/statistics.hpp"

namespace sqglab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string output_root(const std::string& flag, const RunConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return env;
  return config.output_dir;
}

json modes_json(const SpectralField& f) {
  auto arr = json::array();
  const auto& g = f.grid();
  for (int row = 0; row < g.n(); ++row) {
    for (int col = 0; col < g.half(); ++col) {
      const auto c = f[g.index(row, col)];
      if (c != Complex(0.0)) arr.push_back({g.k1(row), g.k2(col), c.real(), c.imag()});
    }
  }
  return arr;
}

json window_summary(const Trajectory& traj, double discard_fraction, double nu) {
  json j;
  const double t0 = window_start(traj, discard_fraction);
  j["window_start"] = t0;
  std::vector<double> t, g;
  for (const auto& r : traj.records) {
    if (r.t >= t0) {
      t.push_back(r.t);
      g.push_back(r.gradsq);
    }
  }
  if (t.size() >= 2) {
    const auto e = epsilon_estimate(traj, nu, t0);
    j["epsilon"] = e.value;
    j["epsilon_limsup"] = e.limsup_proxy;
    j["avg_l2sq"] = time_average(traj, &TrajectoryRecord::l2sq, t0);
    j["avg_h12sq"] = time_average(traj, &TrajectoryRecord::h12sq, t0);
    j["avg_gradsq"] = time_average(traj, &TrajectoryRecord::gradsq, t0);
    j["avg_inject"] = time_average(traj, &TrajectoryRecord::inject, t0);
  }
  if (t.size() >= 10) {
    const auto c = average_convergence(t, g);
    j["converged"] = c.converged;
    j["tail_oscillation"] = c.tail_oscillation;
  } else {
    j["converged"] = nullptr;
  }
  return j;
}

json run_summary(const RunConfig& config, const Problem& problem, const Trajectory& traj) {
  json j;
  j["config"] = json::parse(serialize_config(config));
  j["equation"] = config.equation == Equation::SQG ? "sqg" : "nse";
  j["samples"] = traj.records.size();
  j["steps"] = traj.totals.steps;
  j["substeps"] = traj.totals.substeps;
  j["totals"] = {{"injected", traj.totals.injected},
                 {"damping", traj.totals.damping},
                 {"viscous", traj.totals.viscous},
                 {"residual", traj.totals.residual}};
  j["window"] = window_summary(traj, config.discard_fraction, config.nu);
  const double t0 = window_start(traj, config.discard_fraction);
  const auto in_window =
      std::count_if(traj.records.begin(), traj.records.end(), [t0](const TrajectoryRecord& r) { return r.t >= t0; });
  if (config.equation == Equation::SQG) {
    if (in_window >= 2) {
      const auto b = dissipation_balance_defect(traj, t0);
      j["balance"] = {{"defect", b.defect}, {"viscous", b.viscous}, {"drift", b.drift}, {"identity_gap", b.identity_gap}};
    }
    if (config.gamma > 0.0 && in_window >= 2) {
      const auto env = support_envelope(traj, t0);
      j["support"] = {{"max_l1", env.max_l1},          {"bound_l1", env.bound_l1},
                      {"max_l2", env.max_l2},          {"bound_l2", env.bound_l2},
                      {"max_linf", env.max_linf},      {"bound_linf", env.bound_linf},
                      {"avg_h12sq", env.avg_h12sq},    {"bound_avg_h12sq", env.bound_avg_h12sq},
                      {"violated", env.violated},      {"average_violated", env.average_violated}};
    }
  } else {
    j["lambda"] = problem.lambda;
    if (problem.lambda > 0.0 && config.nu > 0.0 && problem.solver.velocity_forcing) {
      j["kolmogorov_prediction"] = l2_norm_sq(*problem.solver.velocity_forcing) / (config.nu * problem.lambda);
    }
  }
  return j;
}

// Runs a simulation, keeping the last finite state for the abort snapshot.
int simulate_and_write(const RunConfig& config, const Problem& problem, const fs::path& dir, std::ostream& out,
                       std::ostream& err) {
  fs::create_directories(dir);
  SimulationOptions opts;
  opts.oversample = config.oversample;
  opts.lambda = problem.lambda;
  std::optional<SpectralField> last_theta;
  std::optional<VelocityField> last_u;
  double last_t = 0.0;
  opts.on_sqg_step = [&](const SqgState& s) {
    last_theta = s.field;
    last_t = s.t;
  };
  opts.on_nse_step = [&](const NseState& s) {
    last_u = s.field;
    last_t = s.t;
  };
  Trajectory traj;
  try {
    if (config.equation == Equation::SQG) {
      traj = simulate_sqg(problem.solver, *problem.theta0, opts).trajectory;
    } else {
      traj = simulate_nse(problem.solver, *problem.u0, opts).trajectory;
    }
  } catch (const NumericalFailure& e) {
    json snap;
    snap["message"] = e.what();
    snap["failure_time"] = e.time();
    snap["last_finite_time"] = last_t;
    snap["last_l2sq"] = e.last_l2sq();
    snap["n"] = config.n;
    if (last_theta) snap["theta"] = modes_json(*last_theta);
    if (last_u) snap["u"] = {modes_json(last_u->c1), modes_json(last_u->c2)};
    const auto path = dir / "snapshot.json";
    write_text(path.string(), snap.dump(2));
    err << "numerical failure: " << e.what() << "; snapshot written to " << path.string() << "\n";
    return kNumerical;
  }
  write_trajectory_csv((dir / "trajectory.csv").string(), traj);
  write_text((dir / "summary.json").string(), run_summary(config, problem, traj).dump(2));
  out << (dir / "trajectory.csv").string() << "\n" << (dir / "summary.json").string() << "\n";
  return kOk;
}

int cmd_run(const std::string& config_path, const std::string& output_flag, std::ostream& out, std::ostream& err) {
  const auto config = load_config(config_path);
  const auto problem = build_problem(config);
  return simulate_and_write(config, problem, output_root(output_flag, config), out, err);
}

std::string nu_dir(double nu) { return "nu_" + format_double(nu); }

int cmd_sweep(const std::string& config_path, const std::string& output_flag, int jobs, std::ostream& out) {
  const auto config = load_config(config_path);
  if (config.nus.empty()) throw ConfigError("nus: required for sweep");
  const auto problem = build_problem(config);
  SweepResult result;
  try {
    if (config.equation == Equation::SQG) {
      SqgSweepSpec spec;
      spec.base = problem.solver;
      spec.initial = problem.theta0;
      spec.nus = config.nus;
      spec.discard_fraction = config.discard_fraction;
      spec.oversample = config.oversample;
      spec.jobs = jobs;
      result = sqg_nu_sweep(spec);
    } else {
      if (!(problem.lambda > 0.0)) throw ConfigError("forcing: sweep for equation \"nse\" needs an eigenfunction forcing");
      KolmogorovSweepSpec spec;
      spec.base = problem.solver;
      spec.lambda = problem.lambda;
      spec.nus = config.nus;
      spec.discard_fraction = config.discard_fraction;
      spec.jobs = jobs;
      result = kolmogorov_divergence(spec);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("nus: ") + e.what());
  }
  const fs::path root = output_root(output_flag, config);
  fs::create_directories(root);
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    if (result.trajectories[i].records.empty()) continue;
    const auto dir = root / nu_dir(result.entries[i].nu);
    fs::create_directories(dir);
    write_trajectory_csv((dir / "trajectory.csv").string(), result.trajectories[i]);
  }
  const auto path = root / "sweep.json";
  write_text(path.string(), result.to_json());
  out << path.string() << "\n";
  return kOk;
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<CheckReport> reports;
  try {
    reports = run_suite(suite);
  } catch (const std::invalid_argument& e) {
    err << "verify: " << e.what() << " (expected one of operators, identities, balances, statistics, all)\n";
    return kUsage;
  }
  int failed = 0;
  for (const auto& r : reports) {
    out << r.to_json() << "\n";
    if (!r.pass) ++failed;
  }
  json s{{"suite", suite}, {"checks", reports.size()}, {"failed", failed}};
  out << s.dump() << "\n";
  return failed == 0 ? kOk : kVerification;
}

int cmd_stats(const std::string& csv, double nu, double discard, std::ostream& out) {
  Trajectory traj;
  traj.records = read_trajectory_csv(csv);
  if (traj.records.size() < 2) throw std::runtime_error(csv + ": need at least two samples");
  out << window_summary(traj, discard, nu).dump(2) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral lab for forced critical SQG and 2D Navier-Stokes", "sqglab"};
  app.require_subcommand(1);

  std::string config_path, output, suite, csv;
  int jobs = 1;
  double nu = 0.0, discard = 0.2;

  auto* run = app.add_subcommand("run", "Run one simulation and write trajectory.csv and summary.json");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("-o,--output", output, "Output directory (overrides SQGLAB_OUTPUT_ROOT and output_dir)");

  auto* sweep = app.add_subcommand("sweep", "Run the config once per entry of nus and write sweep.json");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("-o,--output", output, "Output directory");
  sweep->add_option("-j,--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run an invariant suite: operators, identities, balances, statistics, all");
  verify->add_option("suite", suite, "Suite name")->required();

  auto* stats = app.add_subcommand("stats", "Time averages and convergence verdict of a trajectory CSV");
  stats->add_option("csv", csv, "trajectory.csv written by run or sweep")->required();
  stats->add_option("--nu", nu, "Viscosity used for epsilon")->required();
  stats->add_option("--discard", discard, "Transient fraction discarded")->check(CLI::Range(0.0, 0.999));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, output, out, err);
    if (*sweep) return cmd_sweep(config_path, output, jobs, out);
    if (*verify) return cmd_verify(suite, out, err);
    if (*stats) return cmd_stats(csv, nu, discard, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace sqglab::cli

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sqglab::cli::run_cli(args, std::cout, std::cerr);
}
