#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace resurge::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid_args = 2;
inline constexpr int solver_error = 3;
inline constexpr int budget = 4;
inline constexpr int verification_failed = 5;
}  // namespace exit_code

// Runs one command.  `args` excludes the program name.  The artifact (JSON or
// CSV) goes to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resurge::cli
