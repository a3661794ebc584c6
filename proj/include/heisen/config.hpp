#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heisen/iet.hpp"

namespace heisen::cli {

/// Parsed experiment configuration. The file format is flat key-value
/// sections:
///
///   [surface]
///   alphabet = A B C
///   pi0 = A B C            # symbols in their order before the exchange
///   pi1 = B C A            # and after
///   lambda = 2/5 3/10 3/10 # decimals or exact "p/q" literals
///
///   [suspension]
///   tau = 2 -1 -1          # or: h = 2 2 2   (exactly one of the two)
///
///   [bundle]
///   b = 0.7 0.4 0.0        # or: b = sample
///   seed = 42
///
///   [run]                  # command-specific parameters
///   ...
///
///   [output]
///   directory = out
///   formats = both         # json | csv | both
struct ExperimentConfig {
  // surface
  iet::RawIet surface;
  bool exactLengths = false;  // every lambda literal was "p/q"

  // suspension: exactly one of tau / h when present
  std::optional<std::vector<std::string>> tau;
  std::optional<std::vector<std::string>> heights;

  // bundle
  std::optional<std::vector<std::string>> offsets;  // absent => "sample"
  bool sampleOffsets = false;
  std::uint64_t seed = 0;

  // run parameters, command-specific
  std::map<std::string, std::string> run;

  // output
  std::string outputDirectory = "out";
  std::string formats = "both";

  bool hasSuspension() const { return tau.has_value() || heights.has_value(); }

  std::string runValue(const std::string& key, const std::string& fallback) const {
    auto it = run.find(key);
    return it == run.end() ? fallback : it->second;
  }
  double runNumber(const std::string& key, double fallback) const;
  std::int64_t runInt(const std::string& key, std::int64_t fallback) const;
  std::vector<double> runNumbers(const std::string& key,
                                 const std::vector<double>& fallback) const;
};

/// Parse and validate a configuration file; defaults are resolved here so
/// the echoed config is complete.
ExperimentConfig parseConfig(const std::string& path);

/// Parse from an in-memory string (used by tests).
ExperimentConfig parseConfigText(const std::string& text,
                                 const std::string& name = "<memory>");

/// Canonical serialization of the semantically relevant fields (everything
/// except the output section), used for artifact naming.
std::string canonicalConfigString(const ExperimentConfig& cfg,
                                  const std::string& command);

/// FNV-1a 64-bit hash of the canonical string, as 16 hex characters.
std::string specHash(const ExperimentConfig& cfg, const std::string& command);

}  // namespace heisen::cli
