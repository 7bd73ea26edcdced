#pragma once

#include <string>
#include <vector>

#include "sqglab/diagnostics.hpp"

namespace sqglab::cli {

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

inline constexpr const char* kCsvHeader = "t,l2sq,h12sq,gradsq,linf,inject,residual,delta,mu";

/// Trajectory CSV; delta and mu are empty for SQG records.
std::string trajectory_csv(const Trajectory& trajectory);
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);
/// Reads a file written by write_trajectory_csv. Throws std::runtime_error on malformed input.
std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace sqglab::cli
