#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Subcommands: run, list-problems, verify-references. `args` excludes argv[0].
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vch::cli
