#include "nsmab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsmab/errors.hpp"

namespace nsmab {
namespace {

// Uniform distribution over a subset of the k pulls, given 0-based indices.
WeightVector uniform_over(const std::vector<std::size_t>& support, std::size_t k) {
  std::vector<double> w(k, 0.0);
  const double mass = 1.0 / static_cast<double>(support.size());
  for (std::size_t s : support) w[s] = mass;
  return WeightVector::from_weights(std::move(w));
}

void require_nonempty(const ArmHistory& history, const char* who) {
  if (history.empty()) throw EmptyHistoryError(std::string(who) + ": empty history");
}

long phase_of(long pull_index, long period, long block_length) {
  return ((pull_index - 1) / block_length) % period;
}

double trend_of(long pull_index, const std::vector<double>& table) {
  return table[static_cast<std::size_t>(pull_index % static_cast<long>(table.size()))];
}

}  // namespace

WeightScheme WeightScheme::since_change(std::vector<long> points) {
  WeightScheme s;
  s.kind = WeightKind::kSinceChange;
  s.change_points = std::move(points);
  return s;
}

WeightScheme WeightScheme::state_matched() {
  WeightScheme s;
  s.kind = WeightKind::kStateMatched;
  return s;
}

WeightScheme WeightScheme::phase_matched(long period, long block_length, bool match_next) {
  WeightScheme s;
  s.kind = WeightKind::kPhaseMatched;
  s.period = period;
  s.block_length = block_length;
  s.match_next = match_next;
  return s;
}

WeightScheme WeightScheme::trend_matched(std::vector<double> table, bool match_next) {
  WeightScheme s;
  s.kind = WeightKind::kTrendMatched;
  s.trend_table = std::move(table);
  s.match_next = match_next;
  return s;
}

WeightScheme WeightScheme::recent_window(double gamma) {
  WeightScheme s;
  s.kind = WeightKind::kRecentWindow;
  s.gamma = gamma;
  return s;
}

WeightVector uniform_weights(const ArmHistory& history) {
  require_nonempty(history, "uniform_weights");
  const std::size_t k = history.pull_count();
  return WeightVector::from_weights(
      std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

WeightVector since_change_weights(const ArmHistory& history,
                                  const std::vector<long>& change_points) {
  require_nonempty(history, "since_change_weights");
  if (change_points.empty() || change_points.front() != 1 ||
      !std::is_sorted(change_points.begin(), change_points.end())) {
    throw ConfigError("since_change_weights: change points must be sorted and start at 1");
  }
  const long k = static_cast<long>(history.pull_count());
  // Last change point relevant to the upcoming pull k+1; anything later is
  // ignored.
  long start = 1;
  for (long c : change_points) {
    if (c > k + 1) break;
    start = c;
  }
  if (start == k + 1) {
    throw NoSupportError("since_change_weights: upcoming pull starts a new segment");
  }
  std::vector<std::size_t> support;
  support.reserve(static_cast<std::size_t>(k - start + 1));
  for (long s = start; s <= k; ++s) support.push_back(static_cast<std::size_t>(s - 1));
  return uniform_over(support, static_cast<std::size_t>(k));
}

WeightVector state_matched_weights(const ArmHistory& history, double current_state) {
  require_nonempty(history, "state_matched_weights");
  const std::size_t k = history.pull_count();
  std::vector<std::size_t> support;
  for (std::size_t s = 1; s < k; ++s) {
    if (history.reward(s - 1) == current_state) support.push_back(s);
  }
  if (support.empty()) {
    throw NoSupportError("state_matched_weights: no pull preceded by the current state");
  }
  return uniform_over(support, k);
}

WeightVector phase_matched_weights(const ArmHistory& history, long period,
                                   long block_length, bool match_next) {
  require_nonempty(history, "phase_matched_weights");
  if (period < 1 || block_length < 1) {
    throw ConfigError("phase_matched_weights: period and block length must be >= 1");
  }
  const long k = static_cast<long>(history.pull_count());
  const long target = phase_of(match_next ? k + 1 : k, period, block_length);
  std::vector<std::size_t> support;
  for (long s = 1; s <= k; ++s) {
    if (phase_of(s, period, block_length) == target) {
      support.push_back(static_cast<std::size_t>(s - 1));
    }
  }
  if (support.empty()) {
    throw NoSupportError("phase_matched_weights: no pull in the target phase yet");
  }
  return uniform_over(support, static_cast<std::size_t>(k));
}

WeightVector trend_matched_weights(const ArmHistory& history,
                                   const std::vector<double>& trend_table,
                                   bool match_next) {
  require_nonempty(history, "trend_matched_weights");
  if (trend_table.empty()) throw ConfigError("trend_matched_weights: empty trend table");
  const long k = static_cast<long>(history.pull_count());
  const double target = trend_of(match_next ? k + 1 : k, trend_table);
  std::vector<std::size_t> support;
  for (long s = 1; s <= k; ++s) {
    if (trend_of(s, trend_table) == target) support.push_back(static_cast<std::size_t>(s - 1));
  }
  if (support.empty()) {
    throw NoSupportError("trend_matched_weights: no pull with the target trend value yet");
  }
  return uniform_over(support, static_cast<std::size_t>(k));
}

WeightVector recent_window_weights(const ArmHistory& history, double gamma) {
  require_nonempty(history, "recent_window_weights");
  if (!(gamma > 0.0)) throw ConfigError("recent_window_weights: gamma must be > 0");
  const std::size_t k = history.pull_count();
  const double raw = std::pow(static_cast<double>(k), 2.0 * gamma / 3.0);
  std::size_t n = raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
  n = std::min(n, k);
  std::vector<std::size_t> support;
  support.reserve(n);
  for (std::size_t s = k - n; s < k; ++s) support.push_back(s);
  return uniform_over(support, k);
}

WeightVector weights_for(const WeightScheme& scheme, const ArmHistory& history,
                         WeightAudit* audit) {
  WeightVector q = [&] {
    try {
      switch (scheme.kind) {
        case WeightKind::kUniform:
          return uniform_weights(history);
        case WeightKind::kSinceChange:
          return since_change_weights(history, scheme.change_points);
        case WeightKind::kStateMatched:
          return state_matched_weights(history, history.last_reward());
        case WeightKind::kPhaseMatched:
          return phase_matched_weights(history, scheme.period, scheme.block_length,
                                       scheme.match_next);
        case WeightKind::kTrendMatched:
          return trend_matched_weights(history, scheme.trend_table, scheme.match_next);
        case WeightKind::kRecentWindow:
          return recent_window_weights(history, scheme.gamma);
      }
      throw ConfigError("weights_for: unknown scheme kind");
    } catch (const NoSupportError&) {
      if (audit) ++audit->fallback_count;
      return uniform_weights(history);
    }
  }();
  if (audit) {
    const double ratio = q.norm2_squared() * static_cast<double>(history.pull_count());
    audit->max_norm_sq_times_pulls = std::max(audit->max_norm_sq_times_pulls, ratio);
  }
  return q;
}

}  // namespace nsmab
