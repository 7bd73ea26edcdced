#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqglab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

/// Environment variable that overrides the config's output_dir.
inline constexpr const char* kOutputRootEnv = "SQGLAB_OUTPUT_ROOT";

/// Entry point of the sqglab tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqglab::cli

int run_cli(int argc, char** argv);
