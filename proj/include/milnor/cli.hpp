#pragma once

#include <ostream>

namespace milnor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitMismatch = 4;

/// Runs `milnor <command> ...`. Reports go to `out` (or --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace milnor::cli
