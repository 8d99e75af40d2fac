#include "nsmab/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>

#include "nsmab/errors.hpp"

namespace nsmab {
namespace {

std::vector<ArmSpec> family_specs(Family family, int count, const EnvironmentSpec& spec,
                                  const TrialSeed& seed, int arm_offset) {
  std::vector<ArmSpec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    switch (family) {
      case Family::kIid:
        out.push_back(IidArmSpec{static_cast<double>(j + 1) / count});
        break;
      case Family::kCompleteDependence:
        out.push_back(CompleteDependenceArmSpec{static_cast<double>(j + 1) / count});
        break;
      case Family::kRotting:
        out.push_back(RottingArmSpec{0.1 + 10.0 * j / count, 0.0});
        break;
      case Family::kRottingJumps: {
        // Shared evenly spaced restart points; per-arm random baselines.
        auto rng = seed.aux_stream(static_cast<std::uint64_t>(arm_offset + j));
        const int segments = spec.jump_segments;
        std::vector<double> means;
        std::vector<long> points;
        for (int m = 0; m < segments; ++m) {
          means.push_back(rng.uniform01());
          points.push_back(m == 0 ? 1 : 1 + (m * spec.horizon) / segments);
        }
        out.push_back(RottingJumpsArmSpec{std::move(means), std::move(points),
                                          0.1 + 10.0 * j / count, 0.1});
        break;
      }
      case Family::kMarkov: {
        // Random irreducible chain; rewards spread evenly over [0, 1].
        auto rng = seed.aux_stream(static_cast<std::uint64_t>(arm_offset + j));
        const int n = spec.markov_states;
        if (n < 2) throw ConfigError("EnvironmentSpec: markov_states must be >= 2");
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
        for (auto& row : rows) {
          row.resize(static_cast<std::size_t>(n));
          double total = 0.0;
          for (double& p : row) {
            p = rng.uniform(0.05, 1.0);
            total += p;
          }
          for (double& p : row) p /= total;
        }
        std::vector<double> rewards;
        for (int s = 0; s < n; ++s) {
          rewards.push_back(static_cast<double>(s) / (n - 1));
        }
        out.push_back(MarkovArmSpec{std::move(rows), std::move(rewards), 0});
        break;
      }
      case Family::kRarelyChanging:
        out.push_back(RarelyChangingArmSpec{spec.horizon});
        break;
      case Family::kPeriodic: {
        if (spec.periods != 3) {
          throw ConfigError("EnvironmentSpec: only the three-period mean ladders are built in");
        }
        std::vector<double> means = {10.0 + 20.0 * j / count, 5.0 + 9.0 * j / count,
                                     1.0 + 4.0 * j / count};
        out.push_back(PeriodicArmSpec{spec.period_length, std::move(means), 0.3});
        break;
      }
      case Family::kKnownTrend:
        out.push_back(KnownTrendArmSpec{0.1 + 6.0 * j / count, spec.trend_table, 0.3});
        break;
      case Family::kDrifting:
        out.push_back(DriftingArmSpec{spec.horizon, spec.window_gamma});
        break;
    }
  }
  return out;
}

}  // namespace

Environment build_environment(const EnvironmentSpec& spec, const TrialSeed& seed) {
  if (spec.num_arms < 1) throw ConfigError("EnvironmentSpec: need at least one arm");
  if (!spec.explicit_arms.empty()) {
    if (static_cast<int>(spec.explicit_arms.size()) != spec.num_arms) {
      throw ConfigError("EnvironmentSpec: explicit arm list size != num_arms");
    }
    return make_mixed(spec.explicit_arms, seed);
  }
  std::vector<ArmSpec> specs;
  if (spec.mix.empty()) {
    specs = family_specs(spec.family, spec.num_arms, spec, seed, 0);
  } else {
    int offset = 0;
    for (const auto& [family, count] : spec.mix) {
      if (count < 1) throw ConfigError("EnvironmentSpec: mix block sizes must be >= 1");
      auto block = family_specs(family, count, spec, seed, offset);
      specs.insert(specs.end(), std::make_move_iterator(block.begin()),
                   std::make_move_iterator(block.end()));
      offset += count;
    }
    if (offset != spec.num_arms) {
      throw ConfigError("EnvironmentSpec: mix blocks cover " + std::to_string(offset) +
                        " arms, expected " + std::to_string(spec.num_arms));
    }
  }
  return make_mixed(specs, seed);
}

TrialResult run_trial(const EnvironmentSpec& env_spec, const PolicySpec& policy_spec,
                      long horizon, std::uint64_t root_seed, std::uint64_t trial_index) {
  if (horizon < env_spec.num_arms) {
    throw ConfigError("run_trial: horizon shorter than the number of arms");
  }
  const TrialSeed seed{root_seed, trial_index};
  Environment env = build_environment(env_spec, seed);
  const int k = env.num_arms();
  auto policy = make_policy(policy_spec, env, horizon, seed.policy_stream());

  std::vector<ArmHistory> histories;
  histories.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) histories.emplace_back(i);

  RegretLedger ledger(k);
  std::vector<RoundRow> rows;
  rows.reserve(static_cast<std::size_t>(horizon));

  for (long t = 1; t <= horizon; ++t) {
    const std::vector<double> means = env.next_means();
    const int arm = policy->select(t, histories);
    const double reward = env.pull(arm);
    histories[static_cast<std::size_t>(arm)].add(t, reward);
    policy->observe(arm, reward);
    ledger.update(means, arm, reward);
    rows.push_back({t, arm, reward, ledger.cum_reward(), ledger.delta_reg(),
                    ledger.path_dependent_reg(),
                    ledger.cum_reward() / static_cast<double>(t)});
  }

  TrialResult result{std::move(rows), std::move(ledger), WeightAudit{}, 0};
  if (const WeightAudit* audit = policy->weight_audit()) result.weight_audit = *audit;
  if (const auto* exp3 = dynamic_cast<const Exp3Policy*>(policy.get())) {
    result.exp3_clip_count = exp3->clip_count();
  }
  return result;
}

int resolve_thread_count(int requested, int trials) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("NSMAB_THREADS")) {
      n = std::atoi(env);
    }
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return n < trials ? n : trials;
}

AggregateResult run_experiment(const EnvironmentSpec& env_spec, const PolicySpec& policy_spec,
                               long horizon, int trials, std::uint64_t root_seed,
                               int threads) {
  if (trials < 1) throw ConfigError("run_experiment: need at least one trial");
  const int workers = resolve_thread_count(threads, trials);

  std::vector<std::optional<TrialResult>> results(static_cast<std::size_t>(trials));
  std::vector<std::string> failures(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};

  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        results[static_cast<std::size_t>(i)] =
            run_trial(env_spec, policy_spec, horizon, root_seed,
                      static_cast<std::uint64_t>(i));
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (int i = 0; i < trials; ++i) {
    if (!failures[static_cast<std::size_t>(i)].empty()) {
      throw std::runtime_error("trial " + std::to_string(i) + ": " +
                               failures[static_cast<std::size_t>(i)]);
    }
  }

  AggregateResult agg;
  agg.summary.reserve(static_cast<std::size_t>(horizon));
  for (long t = 0; t < horizon; ++t) {
    double sum = 0.0;
    double sum_delta = 0.0;
    for (int i = 0; i < trials; ++i) {
      const RoundRow& row = results[static_cast<std::size_t>(i)]->rows[static_cast<std::size_t>(t)];
      sum += row.avg_reward_per_round;
      sum_delta += row.delta_reg;
    }
    const double mean = sum / trials;
    double var = 0.0;
    for (int i = 0; i < trials; ++i) {
      const double d =
          results[static_cast<std::size_t>(i)]->rows[static_cast<std::size_t>(t)].avg_reward_per_round -
          mean;
      var += d * d;
    }
    agg.summary.push_back({t + 1, mean, std::sqrt(var / trials), sum_delta / trials});
  }
  agg.trials.reserve(static_cast<std::size_t>(trials));
  for (auto& r : results) agg.trials.push_back(std::move(*r));
  return agg;
}

ConcentrationResult concentration_check(const ArmSpec& arm_spec, const WeightScheme& scheme,
                                        long t, double delta, long replicates,
                                        std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("concentration_check: delta must be in (0,1)");
  }
  if (replicates < 1 || t < 1) {
    throw ConfigError("concentration_check: need t >= 1 and replicates >= 1");
  }
  long upper = 0;
  long lower = 0;
  for (long r = 0; r < replicates; ++r) {
    const TrialSeed trial_seed{seed, static_cast<std::uint64_t>(r)};
    Environment env = make_mixed({arm_spec}, trial_seed);
    ArmHistory history(0);
    for (long s = 1; s <= t; ++s) history.add(s, env.pull(0));

    const WeightVector q = weights_for(scheme, history);
    const double estimate = weighted_mean(history, q);
    const double next_mean = env.next_means()[0];
    const double disc = env.discrepancy(0, q);
    const double slack = q.norm2() * std::sqrt(std::log(1.0 / delta) / 2.0);

    if (next_mean - estimate - disc > slack) ++upper;
    if (estimate - next_mean + disc > slack) ++lower;
  }
  return {static_cast<double>(upper) / static_cast<double>(replicates),
          static_cast<double>(lower) / static_cast<double>(replicates), replicates};
}

}  // namespace nsmab
