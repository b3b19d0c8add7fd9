#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cashare::cli {

// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;     // unreadable / malformed input, bad parameters
inline constexpr int exit_protocol_error = 3;  // threshold, consecutiveness, mixed schemes

// Runs the `cashare` command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cashare::cli
