#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsmab/config.hpp"
#include "nsmab/engine.hpp"

namespace nsmab {

// Exit codes shared by the command layer and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigOrIo = 2;

// Reads, parses and runs a config file; writes <output>_rounds.csv and
// <output>_summary.csv next to the configured prefix.
int run_config_file(const std::string& path, std::ostream& log, std::ostream& err);

struct PanelParams {
  int num_arms = 150;
  long horizon = 5000;
  int trials = 10;
  std::uint64_t root_seed = 7;
  double exploration_c = 0.0;
  int threads = 0;
};

const std::vector<std::string>& panel_names();

EnvironmentSpec panel_environment(const std::string& name, int num_arms, long horizon);

// Runs one named panel (or "all") for both the weighted index policy and
// the exponential-weights baseline, writing per-round and summary CSVs:
// <name>_rounds.csv / <name>_summary.csv for the index policy and
// <name>_exp3_rounds.csv / <name>_exp3_summary.csv for the baseline.
int run_panel(const std::string& name_or_all, const std::string& out_dir,
              const PanelParams& params, std::ostream& log, std::ostream& err);

// Verification suites behind `verify <name>`; print measured statistics and
// return kExitOk / kExitCheckFailed.
int verify_concentration(std::ostream& log);
int verify_discrepancy_zero(std::ostream& log);
int verify_log_growth(std::ostream& log);

}  // namespace nsmab
