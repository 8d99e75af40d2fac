#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsmab/environment.hpp"
#include "nsmab/policies.hpp"
#include "nsmab/regret_ledger.hpp"

namespace nsmab {

// Declarative environment description, resolvable into a concrete
// Environment per (root_seed, trial) pair. Family-specific fields are only
// read where they apply.
struct EnvironmentSpec {
  Family family = Family::kIid;
  int num_arms = 1;
  long horizon = 1;

  // kPeriodic: three per-period mean ladders over the arms.
  long period_length = 50;
  int periods = 3;

  // kKnownTrend
  std::vector<double> trend_table = {0.1, 1.0, 3.0};

  // kMarkov: per-arm random chains with this many states.
  int markov_states = 2;

  // kRottingJumps: segments evenly spaced over the horizon in pull space.
  int jump_segments = 5;

  // kDrifting: window exponent of the matched weight scheme.
  double window_gamma = 0.75;

  // Non-empty: heterogeneous environment from family blocks, overriding
  // `family`. Each block uses its own family defaults sized to the block.
  std::vector<std::pair<Family, int>> mix;

  // Non-empty: use these arm specs verbatim (overrides family and mix).
  std::vector<ArmSpec> explicit_arms;
};

Environment build_environment(const EnvironmentSpec& spec, const TrialSeed& seed);

struct RoundRow {
  long t;
  int arm;
  double reward;
  double cum_reward;
  double delta_reg;
  double reg_running;
  double avg_reward_per_round;
};

struct TrialResult {
  std::vector<RoundRow> rows;
  RegretLedger ledger;
  WeightAudit weight_audit;
  long exp3_clip_count = 0;
};

// One simulated trial: per-arm init rounds for the index policies, then the
// select / pull / record loop. The conditional-mean snapshot feeding the
// ledger is taken before the pull in every round. Deterministic in
// (specs, horizon, root_seed, trial_index).
TrialResult run_trial(const EnvironmentSpec& env_spec, const PolicySpec& policy_spec,
                      long horizon, std::uint64_t root_seed, std::uint64_t trial_index = 0);

struct SummaryRow {
  long t;
  double mean_avg_reward;
  double std_avg_reward;  // population std over trials
  double mean_delta_reg;
};

struct AggregateResult {
  std::vector<SummaryRow> summary;
  std::vector<TrialResult> trials;
};

// 0 requests auto: the NSMAB_THREADS environment variable if set, else the
// hardware count, clamped to the trial count.
int resolve_thread_count(int requested, int trials);

// Runs `trials` independent trials (seeds derived from root_seed and the
// trial index) and aggregates per-round statistics. Results do not depend
// on the scheduling order.
AggregateResult run_experiment(const EnvironmentSpec& env_spec, const PolicySpec& policy_spec,
                               long horizon, int trials, std::uint64_t root_seed,
                               int threads = 0);

struct ConcentrationResult {
  double upper_violation_rate = 0.0;
  double lower_violation_rate = 0.0;
  long replicates = 0;
};

// Monte-Carlo coverage of the Azuma-style confidence bound: fresh arms are
// pulled t times, the scheme's weights are formed, and both one-sided
// deviations of the weighted reward average from (next mean - discrepancy)
// are compared against ||q|| * sqrt(log(1/delta) / 2).
ConcentrationResult concentration_check(const ArmSpec& arm_spec, const WeightScheme& scheme,
                                        long t, double delta, long replicates,
                                        std::uint64_t seed);

}  // namespace nsmab
