#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace coarsekit::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kExitInputError = 2;

/// COARSEKIT_EXACT_CAP if set, else `fallback`. Throws InvalidInput when
/// the variable is not a nonnegative integer.
std::size_t exact_cap_from_env(std::size_t fallback);

/// Runs one subcommand. `args` excludes the program name. The JSON report
/// (or a {"error": ...} object) is written to `out`; exit code 0 for any
/// computed verdict, 2 for input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coarsekit::cli
