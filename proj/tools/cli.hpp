#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrbmf::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;
inline constexpr int kSolver = 3;

/// Runs one command line (without the program name) and returns its exit
/// code. Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace nrbmf::cli
