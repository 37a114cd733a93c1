#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tautband::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one `tautband` invocation. `args` excludes the program name.
/// Data goes to files named by flags or to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tautband::cli
