#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace levelgen::cli {

inline constexpr int kConfigSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// code: 0 on success, 1 on invalid input or usage, 2 on runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levelgen::cli
