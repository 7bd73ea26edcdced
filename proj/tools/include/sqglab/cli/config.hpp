#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqglab/field.hpp"
#include "sqglab/integrator.hpp"

namespace sqglab::cli {

/// Config error carrying the offending field path in its message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a cos(k.x) + b sin(k.x); a scalar for SQG, a stream function for NSE.
struct ModeSpec {
  int k1 = 0;
  int k2 = 0;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
  bool operator==(const ModeSpec&) const = default;
};

struct ForcingSpec {
  std::string kind = "default";  // default | modes | kolmogorov | shear | file | none
  double amplitude = 1.0;
  double max_shell = 4.0;        // default
  std::vector<ModeSpec> modes;   // modes
  int k1 = 1, k2 = 2;            // kolmogorov
  double alpha1 = 1.0, beta1 = 0.0, alpha2 = 1.0, beta2 = 0.0;
  int k = 1;                     // shear
  std::string file;              // file: JSON object with a "modes" array
  bool operator==(const ForcingSpec&) const = default;
};

struct InitialSpec {
  std::string kind;  // zero | random | modes | steady | forcing; empty picks the equation default
  double amplitude = 1.0;
  double max_k = 8.0;
  double slope = -1.5;
  std::vector<ModeSpec> modes;
  bool operator==(const InitialSpec&) const = default;
};

struct RunConfig {
  Equation equation = Equation::SQG;
  double nu = 1e-3;
  double gamma = 1.0;
  int n = 64;
  double dt = 1e-2;
  double t_end = 10.0;
  double discard_fraction = 0.2;
  int sample_stride = 10;
  double cfl_limit = 0.5;
  int oversample = 1;
  std::uint64_t seed = 0;
  std::string output_dir = "sqglab-out";
  std::vector<double> nus;
  bool forcing_given = false;
  ForcingSpec forcing;
  InitialSpec initial;
  bool operator==(const RunConfig&) const = default;
};

/// Parses JSON text. Unknown keys and wrong types raise ConfigError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON with every setting spelled out; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Fields and forcing built from a config.
struct Problem {
  SolverConfig solver;
  std::optional<SpectralField> theta0;  // SQG
  std::optional<VelocityField> u0;      // NSE
  double lambda = 0.0;                  // NSE forcing eigenvalue, 0 when the forcing is not an eigenfunction
};

Problem build_problem(const RunConfig& config);

}  // namespace sqglab::cli
