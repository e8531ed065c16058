// vdfm/cli.hpp - the `vdfm` command-line driver
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vdfm::cli
{

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,   // validation, coherence or schema failure
  kUsage = 2,     // bad arguments, unreadable files, wrong model kind
  kInternal = 3,
};

/// Runs `vdfm <args...>` (args excludes the program name). Payload goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace vdfm::cli
