#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests drive it with string streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace eqih::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
/// A FILE argument of "-" reads the model from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace eqih::cli
