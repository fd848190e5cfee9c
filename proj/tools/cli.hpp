#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrc::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,       ///< malformed command line
    kValidation = 2,  ///< invalid parameters, specs or shapes
    kFormat = 3,      ///< unreadable or unwritable files
    kNumerical = 4,   ///< disconnected graphs, failed decompositions
};

inline constexpr int kSchemaVersion = 1;

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrc::cli
