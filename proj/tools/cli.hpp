#pragma once

#include <iosfwd>

namespace arw::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kInternalError = 3;

/// Parses argv, runs one subcommand and returns its exit code. The
/// human-readable summary goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace arw::cli
