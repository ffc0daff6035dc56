#pragma once

#include <iosfwd>

namespace ntn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumeric = 3 };

/// Full command-line entry point; writes CSV to `out` (or to --out) and
/// one-line diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ntn::cli
