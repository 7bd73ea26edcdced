#pragma once

#include <string>
#include <vector>

#include "sqglab/statistics.hpp"

namespace sqglab::cli {

/// Suite names accepted by run_suite, in the order "all" runs them.
const std::vector<std::string>& suite_names();

/// Runs one invariant suite (operators, identities, balances, statistics or all).
/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckReport> run_suite(const std::string& name);

}  // namespace sqglab::cli
