#pragma once

#include <iosfwd>

namespace mtn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitError = 2;

/// The `mtn` command line: convert, validate, stats, evaluate, diff and
/// perturb. Returns 0 on success, 1 when violations are found, 2 on usage,
/// I/O or format errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtn::cli
