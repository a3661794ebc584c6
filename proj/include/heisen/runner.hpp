#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "heisen/config.hpp"

namespace heisen::cli {

struct RunOptions {
  std::optional<std::uint64_t> seed;    // overrides bundle.seed
  int threads = 1;                      // caps workers; never changes results
  std::optional<std::string> outDir;    // overrides output.directory
  std::optional<std::string> format;    // overrides output.formats
};

inline const char* kSubcommands[] = {
    "validate", "suspend",  "admissible", "iterate", "birkhoff",
    "correlate", "spectrum", "rokhlin",    "cohom",   "commutator"};

/// Dispatches one subcommand; writes artifacts named <command>-<hash>.* into
/// the output directory. Returns the process exit code: 0 success, 2
/// validation failure, 3 numerical-guard failure. Error text goes to stderr.
int runSubcommand(const std::string& name, ExperimentConfig cfg,
                  const RunOptions& opts);

}  // namespace heisen::cli
