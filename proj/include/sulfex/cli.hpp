#pragma once

#include <iosfwd>

namespace sulfex {

/// Exit codes: 0 success, 2 invalid input or usage, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// The `sulfex` command line. Reads SULFEX_SEED for the default seed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sulfex
