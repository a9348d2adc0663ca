#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multisym::cli {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int failure = 1;
inline constexpr int input = 2;
}  // namespace exit_code

/// Runs the command line `args` (without the program name); reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// UTC time in ISO 8601, used for the report timestamp field.
std::string utc_timestamp();

}  // namespace multisym::cli
