#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laissez {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int io = 2;
inline constexpr int non_quiescent = 3;
}  // namespace exit_code

/// Entry point of the `laissez` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace laissez
