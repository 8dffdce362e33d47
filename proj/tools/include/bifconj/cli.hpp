#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace bifconj::cli {

enum ExitCode : int { kOk = 0, kReportFailure = 1, kInputError = 2 };

// args excludes the program name. Output goes to out, diagnostics and usage
// text to err (help requested with --help goes to out).
int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bifconj::cli
