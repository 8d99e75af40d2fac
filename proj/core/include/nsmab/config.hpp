#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsmab/engine.hpp"
#include "nsmab/policies.hpp"

namespace nsmab {

// A fully validated experiment description.
struct ExperimentConfig {
  EnvironmentSpec env;
  PolicySpec policy;
  int trials = 1;
  std::uint64_t root_seed = 1;
  std::string output_prefix = "experiment";
};

struct ParseIssue {
  int line;  // 1-based; 0 for file-level issues
  std::string message;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<ParseIssue> issues;
  bool ok() const { return config.has_value() && issues.empty(); }
};

// Parses a line-oriented key=value experiment description ('#' starts a
// comment). Collects every issue with its line number instead of stopping
// at the first one.
ParseOutcome parse_config(std::string_view text);

}  // namespace nsmab
