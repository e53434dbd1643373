#pragma once

#include <iosfwd>

namespace vismca::service {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation, ingest or domain error
inline constexpr int kExitUsage = 2;

/// Entry point of the `vismca` tool. Writes results to `out` and diagnostics
/// to `err`; with --json, failures are reported on `err` as error JSON.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vismca::service
