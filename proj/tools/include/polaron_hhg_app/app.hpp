#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "polaron_hhg/config.hpp"

namespace polaron::app {

struct ModeOutcome {
  std::vector<std::string> artifacts;  // file names inside the output directory
  /// Some scan points failed; their errors are listed in failures.txt.
  bool partial = false;
};

/// Runs one mode and writes its artifacts into config.output_dir, keeping
/// manifest.txt current after every file. Throws polaron::Error after
/// marking the manifest as failed.
ModeOutcome run_mode(Mode mode, const RunConfig& config, int workers);

/// Parses argv, runs the mode, reports problems on `err`. Returns the exit status.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace polaron::app
