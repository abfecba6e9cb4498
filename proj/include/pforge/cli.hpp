// Command-line driver: translate, gen-tests, verify, shadow, metrics.

#pragma once

#include <iosfwd>

namespace pforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // counterexample or oracle disagreement
inline constexpr int kExitUsage = 2;    // bad flags or unreadable/invalid input
inline constexpr int kExitInfra = 3;    // solver missing or misbehaving

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pforge
