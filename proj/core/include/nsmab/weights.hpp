#pragma once

#include <vector>

#include "nsmab/arm_history.hpp"
#include "nsmab/weight_vector.hpp"

namespace nsmab {

enum class WeightKind {
  kUniform,
  kSinceChange,
  kStateMatched,
  kPhaseMatched,
  kTrendMatched,
  kRecentWindow,
};

// Description of how to spread estimation mass over an arm's past pulls.
// Only the fields relevant to `kind` are read.
struct WeightScheme {
  WeightKind kind = WeightKind::kUniform;

  // kSinceChange: sorted pull-index change points, first entry 1.
  std::vector<long> change_points;

  // kPhaseMatched: pull index n belongs to phase floor((n-1)/block_length) mod period.
  long period = 1;
  long block_length = 1;

  // kTrendMatched: trend value of pull n is trend_table[n mod size].
  std::vector<double> trend_table;

  // kPhaseMatched / kTrendMatched: match the phase of the upcoming pull
  // (the value the estimate is for) rather than the latest one.
  bool match_next = true;

  // kRecentWindow: window over the last floor(pull_count^(2*gamma/3)) pulls.
  double gamma = 1.0;

  static WeightScheme uniform() { return {}; }
  static WeightScheme since_change(std::vector<long> points);
  static WeightScheme state_matched();
  static WeightScheme phase_matched(long period, long block_length = 1, bool match_next = true);
  static WeightScheme trend_matched(std::vector<double> table, bool match_next = true);
  static WeightScheme recent_window(double gamma);
};

// All constructors return a distribution supported only on actual pulls of
// the arm, or throw (EmptyHistoryError / NoSupportError / ConfigError).

// Equal mass 1/k on every pull.
WeightVector uniform_weights(const ArmHistory& history);

// Equal mass on the pulls at or after the last change point relevant to the
// upcoming pull (points up to pull_count+1 are considered, later ones
// ignored). If the upcoming pull starts a fresh segment there is nothing to
// match and NoSupportError is thrown.
WeightVector since_change_weights(const ArmHistory& history,
                                  const std::vector<long>& change_points);

// Equal mass on pulls whose preceding emitted value equals current_state.
// The first pull has no predecessor and never matches.
WeightVector state_matched_weights(const ArmHistory& history, double current_state);

// Equal mass on pulls in the same periodic phase as the target pull.
WeightVector phase_matched_weights(const ArmHistory& history, long period,
                                   long block_length = 1, bool match_next = true);

// Equal mass on pulls with the same trend value as the target pull.
WeightVector trend_matched_weights(const ArmHistory& history,
                                   const std::vector<double>& trend_table,
                                   bool match_next = true);

// Equal mass on the most recent n pulls, n = floor(k^(2*gamma/3)) clamped
// to [1, k].
WeightVector recent_window_weights(const ArmHistory& history, double gamma);

// Running audit of the norm condition the index policies rely on, plus how
// often a matching scheme had no support and fell back to uniform.
struct WeightAudit {
  double max_norm_sq_times_pulls = 0.0;
  long fallback_count = 0;
};

// Dispatch on scheme kind. NoSupportError falls back to uniform weights and
// is counted in the audit; other errors propagate.
WeightVector weights_for(const WeightScheme& scheme, const ArmHistory& history,
                         WeightAudit* audit = nullptr);

}  // namespace nsmab
