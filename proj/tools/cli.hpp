#pragma once

#include <iosfwd>

namespace mslift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitValidation = 2;

/// Entry point of the command-line tool with injectable streams. Reports go
/// to `out` as JSON; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mslift::cli
