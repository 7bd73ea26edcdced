#include "sqglab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqglab/generators.hpp"
#include "sqglab/nonlinear.hpp"
#include "sqglab/operators.hpp"

namespace sqglab::cli {

namespace {

using nlohmann::json;

// Typed access to one JSON object with a path prefix for error messages;
// keys not consumed by the time check_unknown() runs are rejected.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where("") + "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where(key) + "wrong type");
    }
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where(const std::string& key) const {
    const auto p = key.empty() ? path_ : child(key);
    return (p.empty() ? std::string("config") : p) + ": ";
  }

  void check_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<ModeSpec> parse_modes(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<ModeSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Reader r(arr[i], path + "[" + std::to_string(i) + "]");
    ModeSpec m;
    r.get("k1", m.k1);
    r.get("k2", m.k2);
    r.get("cos", m.cos_amplitude);
    r.get("sin", m.sin_amplitude);
    r.check_unknown();
    out.push_back(m);
  }
  return out;
}

json modes_json(const std::vector<ModeSpec>& modes) {
  auto arr = json::array();
  for (const auto& m : modes) arr.push_back({{"k1", m.k1}, {"k2", m.k2}, {"cos", m.cos_amplitude}, {"sin", m.sin_amplitude}});
  return arr;
}

const std::set<std::string> kForcingKinds{"default", "modes", "kolmogorov", "shear", "file", "none"};
const std::set<std::string> kInitialKinds{"", "zero", "random", "modes", "steady", "forcing"};

SpectralField scalar_modes(const GridPtr& grid, const std::vector<ModeSpec>& modes, const std::string& path) {
  std::vector<Wave> waves;
  for (const auto& m : modes) {
    if (std::max(std::abs(m.k1), std::abs(m.k2)) > grid->cutoff()) {
      throw ConfigError(path + ": mode (" + std::to_string(m.k1) + "," + std::to_string(m.k2) +
                        ") outside the resolved range");
    }
    if (m.k1 == 0 && m.k2 == 0) throw ConfigError(path + ": the (0,0) mode is not allowed");
    waves.push_back({m.k1, m.k2, m.cos_amplitude, m.sin_amplitude});
  }
  return wave_field(grid, waves);
}

// Common shell |k|^2 of all modes, 0 if they differ.
double common_shell(const std::vector<ModeSpec>& modes) {
  if (modes.empty()) return 0.0;
  const int s = modes.front().k1 * modes.front().k1 + modes.front().k2 * modes.front().k2;
  for (const auto& m : modes) {
    if (m.k1 * m.k1 + m.k2 * m.k2 != s) return 0.0;
  }
  return s;
}

std::vector<ModeSpec> load_mode_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("forcing.file: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("forcing.file: " + std::string(e.what()));
  }
  Reader r(j, "forcing.file");
  std::vector<ModeSpec> modes;
  if (!r.has("modes")) throw ConfigError("forcing.file: missing \"modes\"");
  modes = parse_modes(r.at("modes"), "forcing.file.modes");
  r.check_unknown();
  return modes;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  Reader r(j, "");
  std::string eq = "sqg";
  r.get("equation", eq);
  if (eq == "sqg") {
    c.equation = Equation::SQG;
  } else if (eq == "nse") {
    c.equation = Equation::NSE;
    c.gamma = 0.0;
  } else {
    throw ConfigError("equation: expected \"sqg\" or \"nse\"");
  }
  r.get("nu", c.nu);
  r.get("gamma", c.gamma);
  if (r.has("grid")) {
    Reader g(r.at("grid"), "grid");
    g.get("n", c.n);
    g.check_unknown();
  }
  r.get("dt", c.dt);
  r.get("t_end", c.t_end);
  r.get("discard_fraction", c.discard_fraction);
  r.get("sample_stride", c.sample_stride);
  r.get("cfl_limit", c.cfl_limit);
  r.get("oversample", c.oversample);
  r.get("seed", c.seed);
  r.get("output_dir", c.output_dir);
  if (r.has("nus")) {
    const auto& arr = r.at("nus");
    if (!arr.is_array()) throw ConfigError("nus: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw ConfigError("nus[" + std::to_string(i) + "]: wrong type");
      c.nus.push_back(arr[i].get<double>());
    }
  }
  if (r.has("forcing")) {
    c.forcing_given = true;
    Reader f(r.at("forcing"), "forcing");
    auto& fs = c.forcing;
    f.get("kind", fs.kind);
    if (!kForcingKinds.count(fs.kind)) throw ConfigError("forcing.kind: unknown kind \"" + fs.kind + "\"");
    f.get("amplitude", fs.amplitude);
    f.get("max_shell", fs.max_shell);
    if (f.has("modes")) fs.modes = parse_modes(f.at("modes"), "forcing.modes");
    f.get("k1", fs.k1);
    f.get("k2", fs.k2);
    f.get("alpha1", fs.alpha1);
    f.get("beta1", fs.beta1);
    f.get("alpha2", fs.alpha2);
    f.get("beta2", fs.beta2);
    f.get("k", fs.k);
    f.get("file", fs.file);
    f.check_unknown();
  }
  if (r.has("initial")) {
    Reader i(r.at("initial"), "initial");
    auto& is = c.initial;
    i.get("kind", is.kind);
    if (!kInitialKinds.count(is.kind)) throw ConfigError("initial.kind: unknown kind \"" + is.kind + "\"");
    i.get("amplitude", is.amplitude);
    i.get("max_k", is.max_k);
    i.get("slope", is.slope);
    if (i.has("modes")) is.modes = parse_modes(i.at("modes"), "initial.modes");
    i.check_unknown();
  }
  r.check_unknown();

  if (c.equation == Equation::NSE && !c.forcing_given) {
    throw ConfigError("forcing: required for equation \"nse\" (use {\"kind\": \"none\"} for unforced runs)");
  }
  if (!(c.nu >= 0.0)) throw ConfigError("nu: must be >= 0");
  if (!(c.gamma >= 0.0)) throw ConfigError("gamma: must be >= 0");
  if (c.equation == Equation::NSE && c.gamma != 0.0) throw ConfigError("gamma: must be 0 for equation \"nse\"");
  if (c.n < 16 || c.n % 2 != 0) throw ConfigError("grid.n: must be even and >= 16, got " + std::to_string(c.n));
  if (!(c.dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end: must be > 0");
  if (!(c.discard_fraction >= 0.0 && c.discard_fraction < 1.0)) throw ConfigError("discard_fraction: must be in [0, 1)");
  if (c.sample_stride < 1) throw ConfigError("sample_stride: must be >= 1");
  if (!(c.cfl_limit > 0.0)) throw ConfigError("cfl_limit: must be > 0");
  if (c.oversample < 1) throw ConfigError("oversample: must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["equation"] = c.equation == Equation::SQG ? "sqg" : "nse";
  j["nu"] = c.nu;
  j["gamma"] = c.gamma;
  j["grid"] = {{"n", c.n}};
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["discard_fraction"] = c.discard_fraction;
  j["sample_stride"] = c.sample_stride;
  j["cfl_limit"] = c.cfl_limit;
  j["oversample"] = c.oversample;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["nus"] = c.nus;
  if (c.forcing_given) {
    const auto& f = c.forcing;
    j["forcing"] = {{"kind", f.kind},     {"amplitude", f.amplitude}, {"max_shell", f.max_shell},
                    {"modes", modes_json(f.modes)},
                    {"k1", f.k1},         {"k2", f.k2},               {"alpha1", f.alpha1},
                    {"beta1", f.beta1},   {"alpha2", f.alpha2},       {"beta2", f.beta2},
                    {"k", f.k},           {"file", f.file}};
  }
  const auto& i = c.initial;
  j["initial"] = {{"kind", i.kind},
                  {"amplitude", i.amplitude},
                  {"max_k", i.max_k},
                  {"slope", i.slope},
                  {"modes", modes_json(i.modes)}};
  return j.dump(2);
}

Problem build_problem(const RunConfig& c) {
  Problem p;
  GridPtr grid;
  try {
    grid = Grid::make(c.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid.n: ") + e.what());
  }
  auto& s = p.solver;
  s.equation = c.equation;
  s.nu = c.nu;
  s.gamma = c.gamma;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.grid = grid;
  s.seed = c.seed;
  s.sample_stride = c.sample_stride;
  s.cfl_limit = c.cfl_limit;

  const auto& f = c.forcing;
  std::vector<ModeSpec> modes = f.modes;
  if (f.kind == "file") modes = load_mode_file(f.file);
  if (c.equation == Equation::SQG) {
    if (f.kind == "default") {
      s.scalar_forcing = f.amplitude * default_sqg_forcing(grid, c.seed, f.max_shell);
    } else if (f.kind == "modes" || f.kind == "file") {
      s.scalar_forcing = f.amplitude * scalar_modes(grid, modes, "forcing.modes");
    } else if (f.kind != "none") {
      throw ConfigError("forcing.kind: \"" + f.kind + "\" is only available for equation \"nse\"");
    }
  } else {
    if (f.kind == "kolmogorov" || f.kind == "default") {
      const auto k = [&] {
        try {
          return kolmogorov_force(grid, {f.k1, f.k2, f.alpha1, f.beta1, f.alpha2, f.beta2});
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("forcing: ") + e.what());
        }
      }();
      if (k.degenerate) throw ConfigError("forcing: Kolmogorov construction is degenerate (f = 0)");
      s.velocity_forcing = f.amplitude * k.f;
      p.lambda = k.lambda;
    } else if (f.kind == "shear") {
      if (f.k < 1 || f.k > grid->cutoff()) throw ConfigError("forcing.k: outside the resolved range");
      s.velocity_forcing = shear_velocity(grid, f.k, f.amplitude);
      p.lambda = static_cast<double>(f.k) * f.k;
    } else if (f.kind == "modes" || f.kind == "file") {
      s.velocity_forcing = f.amplitude * velocity_from_stream(scalar_modes(grid, modes, "forcing.modes"));
      p.lambda = common_shell(modes);
    } else if (f.kind != "none") {
      throw ConfigError("forcing.kind: unknown kind \"" + f.kind + "\"");
    }
  }

  const auto& i = c.initial;
  std::string kind = i.kind;
  if (kind.empty()) kind = (c.equation == Equation::NSE && p.lambda > 0.0 && c.nu > 0.0) ? "steady" : "zero";
  if (c.equation == Equation::SQG) {
    if (kind == "zero") {
      p.theta0 = SpectralField(grid);
    } else if (kind == "random") {
      auto r = random_field(grid, c.seed + 1, i.max_k, i.slope);
      const double l2 = std::sqrt(l2_norm_sq(r));
      p.theta0 = l2 > 0.0 ? (i.amplitude / l2) * r : r;
    } else if (kind == "modes") {
      p.theta0 = scalar_modes(grid, i.modes, "initial.modes");
    } else if (kind == "forcing") {
      p.theta0 = s.scalar_forcing ? i.amplitude * *s.scalar_forcing : SpectralField(grid);
    } else {
      throw ConfigError("initial.kind: \"" + kind + "\" is only available for equation \"nse\"");
    }
  } else {
    if (kind == "zero") {
      p.u0 = VelocityField(grid);
    } else if (kind == "random") {
      auto r = random_velocity(grid, c.seed + 1, i.max_k, i.slope);
      const double l2 = std::sqrt(l2_norm_sq(r));
      p.u0 = l2 > 0.0 ? (i.amplitude / l2) * r : r;
    } else if (kind == "modes") {
      p.u0 = velocity_from_stream(scalar_modes(grid, i.modes, "initial.modes"));
    } else if (kind == "forcing") {
      p.u0 = s.velocity_forcing ? i.amplitude * *s.velocity_forcing : VelocityField(grid);
    } else {
      if (!(p.lambda > 0.0) || !(c.nu > 0.0) || !s.velocity_forcing) {
        throw ConfigError("initial.kind: \"steady\" needs nu > 0 and an eigenfunction forcing");
      }
      p.u0 = (1.0 / (c.nu * p.lambda)) * *s.velocity_forcing;
    }
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return p;
}

}  // namespace sqglab::cli
