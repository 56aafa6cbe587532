#pragma once

#include <ostream>

namespace rnm::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,  ///< check-props found a counterexample
  kExitValidation = 2,       ///< bad arguments, model file or weights; no root found
  kExitResource = 3,         ///< combination cap, time budget or unwritable output
};

/// Parses the command line and runs one subcommand. Machine output goes to
/// files under --output-dir; `out` gets a short human summary, `err` the
/// diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rnm::cli
