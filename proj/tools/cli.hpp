#pragma once

// The pscurve command line, callable in-process for tests.

#include <iosfwd>
#include <string>
#include <vector>

namespace pscurve::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseError = 1;
inline constexpr int kInvalidPath = 2;     // validate: degenerate or not strongly regular
inline constexpr int kNotEquivalent = 3;
inline constexpr int kRuntimeError = 4;
inline constexpr int kUsageError = 64;

/// args excludes the program name. The report goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pscurve::cli
