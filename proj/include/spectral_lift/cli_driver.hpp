#pragma once
// Command-line front end: build | lift | verify | sweep.
//
// Exit codes: 0 success, 1 verification failure or lift domain breach,
// 2 usage or I/O error.

#include <iosfwd>

namespace spectral_lift {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectral_lift
