#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "nsmab/engine.hpp"

using namespace nsmab;

namespace {

EnvironmentSpec iid_spec(int k, long horizon) {
  EnvironmentSpec env;
  env.family = Family::kIid;
  env.num_arms = k;
  env.horizon = horizon;
  return env;
}

PolicySpec weighted_spec() {
  PolicySpec p;
  p.kind = PolicyKind::kWeightedUcb;
  return p;
}

bool same_rows(const std::vector<RoundRow>& a, const std::vector<RoundRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t != b[i].t || a[i].arm != b[i].arm || a[i].reward != b[i].reward ||
        a[i].cum_reward != b[i].cum_reward || a[i].delta_reg != b[i].delta_reg ||
        a[i].reg_running != b[i].reg_running ||
        a[i].avg_reward_per_round != b[i].avg_reward_per_round) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("a single arm accumulates no dynamic regret") {
  for (PolicyKind kind : {PolicyKind::kWeightedUcb, PolicyKind::kExp3, PolicyKind::kUcb1}) {
    PolicySpec policy;
    policy.kind = kind;
    const auto result = run_trial(iid_spec(1, 100), policy, 100, 5, 0);
    CHECK(result.ledger.delta_reg() == 0.0);
  }
}

TEST_CASE("equal means leave the dynamic regret at exactly zero") {
  EnvironmentSpec env = iid_spec(4, 200);
  env.explicit_arms = std::vector<ArmSpec>(4, IidArmSpec{0.5});
  const auto result = run_trial(env, weighted_spec(), 200, 6, 0);
  CHECK(result.ledger.delta_reg() == 0.0);
}

TEST_CASE("ledger means are snapshotted before the pull advances the arm") {
  EnvironmentSpec env;
  env.family = Family::kRotting;
  env.num_arms = 1;
  env.horizon = 6;
  env.explicit_arms = {RottingArmSpec{1.0, 0.0}};
  const auto result = run_trial(env, weighted_spec(), 6, 7, 0);
  const auto& trace = result.ledger.mean_trace()[0];
  for (std::size_t t = 0; t < trace.size(); ++t) {
    CHECK(trace[t] == doctest::Approx(1.0 / static_cast<double>(t + 1)).epsilon(1e-12));
  }
}

TEST_CASE("trials are deterministic in their seed coordinates") {
  const auto a = run_trial(iid_spec(3, 50), weighted_spec(), 50, 9, 4);
  const auto b = run_trial(iid_spec(3, 50), weighted_spec(), 50, 9, 4);
  CHECK(same_rows(a.rows, b.rows));
  const auto c = run_trial(iid_spec(3, 50), weighted_spec(), 50, 9, 5);
  CHECK_FALSE(same_rows(a.rows, c.rows));
}

TEST_CASE("per-round bookkeeping is internally consistent") {
  const auto result = run_trial(iid_spec(5, 300), weighted_spec(), 300, 10, 0);
  double prev_delta = 0.0;
  for (const RoundRow& row : result.rows) {
    CHECK(row.avg_reward_per_round == row.cum_reward / static_cast<double>(row.t));
    CHECK(row.delta_reg >= prev_delta);
    CHECK(row.delta_reg >= row.reg_running);
    prev_delta = row.delta_reg;
  }
  CHECK(result.rows.size() == 300);
}

TEST_CASE("horizons shorter than the arm count are rejected up front") {
  CHECK_THROWS_AS(run_trial(iid_spec(10, 5), weighted_spec(), 5, 1, 0), ConfigError);
}

TEST_CASE("experiment failures carry the trial index") {
  EnvironmentSpec env = iid_spec(3, 100);
  env.periods = 4;
  env.family = Family::kPeriodic;  // only the three-period ladders exist
  try {
    run_experiment(env, weighted_spec(), 100, 2, 1);
    FAIL("expected a failure");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("a single trial aggregates to itself with zero spread") {
  const auto agg = run_experiment(iid_spec(4, 120), weighted_spec(), 120, 1, 21);
  REQUIRE(agg.trials.size() == 1);
  for (std::size_t t = 0; t < agg.summary.size(); ++t) {
    CHECK(agg.summary[t].mean_avg_reward == agg.trials[0].rows[t].avg_reward_per_round);
    CHECK(agg.summary[t].std_avg_reward == 0.0);
    CHECK(agg.summary[t].mean_delta_reg == agg.trials[0].rows[t].delta_reg);
  }
}

TEST_CASE("serial and parallel execution agree bit for bit") {
  const auto serial = run_experiment(iid_spec(5, 200), weighted_spec(), 200, 6, 33, 1);
  const auto parallel = run_experiment(iid_spec(5, 200), weighted_spec(), 200, 6, 33, 3);
  REQUIRE(serial.trials.size() == parallel.trials.size());
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    CHECK(same_rows(serial.trials[i].rows, parallel.trials[i].rows));
  }
  for (std::size_t t = 0; t < serial.summary.size(); ++t) {
    CHECK(serial.summary[t].mean_avg_reward == parallel.summary[t].mean_avg_reward);
    CHECK(serial.summary[t].std_avg_reward == parallel.summary[t].std_avg_reward);
    CHECK(serial.summary[t].mean_delta_reg == parallel.summary[t].mean_delta_reg);
  }
}

TEST_CASE("the thread override variable is honored") {
  setenv("NSMAB_THREADS", "2", 1);
  CHECK(resolve_thread_count(0, 8) == 2);
  unsetenv("NSMAB_THREADS");
  CHECK(resolve_thread_count(3, 8) == 3);
  CHECK(resolve_thread_count(16, 4) == 4);  // clamped to the trial count
}

TEST_CASE("weight audits flow into the trial result") {
  // Uniform scheme keeps the norm product at exactly one.
  PolicySpec uniform = weighted_spec();
  uniform.scheme = WeightScheme::uniform();
  const auto result = run_trial(iid_spec(4, 200), uniform, 200, 40, 0);
  CHECK(result.weight_audit.max_norm_sq_times_pulls == doctest::Approx(1.0));
  CHECK(result.weight_audit.fallback_count == 0);

  // Trend matching has no support right after the init round, so the
  // fallback counter must move.
  EnvironmentSpec env;
  env.family = Family::kKnownTrend;
  env.num_arms = 4;
  env.horizon = 200;
  const auto trend = run_trial(env, weighted_spec(), 200, 41, 0);
  CHECK(trend.weight_audit.fallback_count > 0);
}

TEST_CASE("degenerate arms never violate the concentration bound") {
  const ConcentrationResult r =
      concentration_check(IidArmSpec{1.0}, WeightScheme::uniform(), 50, 0.05, 2000, 3);
  CHECK(r.upper_violation_rate == 0.0);
  CHECK(r.lower_violation_rate == 0.0);
}

TEST_CASE("violation rates respect the confidence level and its ordering") {
  const ArmSpec arm = IidArmSpec{0.5};
  const WeightScheme scheme = WeightScheme::uniform();
  const ConcentrationResult tight =
      concentration_check(arm, scheme, 100, 0.05, 20000, 11);
  const ConcentrationResult loose =
      concentration_check(arm, scheme, 100, 0.5, 20000, 11);
  CHECK(tight.upper_violation_rate <= 0.05);
  CHECK(tight.lower_violation_rate <= 0.05);
  CHECK(loose.upper_violation_rate <= 0.5);
  CHECK(loose.upper_violation_rate >= tight.upper_violation_rate);
  CHECK(loose.lower_violation_rate >= tight.lower_violation_rate);
}

TEST_CASE("concentration check validates its arguments") {
  CHECK_THROWS_AS(concentration_check(IidArmSpec{0.5}, WeightScheme::uniform(), 10, 0.0, 10, 1),
                  ConfigError);
  CHECK_THROWS_AS(concentration_check(IidArmSpec{0.5}, WeightScheme::uniform(), 0, 0.1, 10, 1),
                  ConfigError);
}

TEST_CASE("panel environments lay out the documented mean ladders") {
  EnvironmentSpec periodic;
  periodic.family = Family::kPeriodic;
  periodic.num_arms = 150;
  periodic.horizon = 5000;
  Environment p = build_environment(periodic, TrialSeed{60, 0});
  // First block: arm i mean 10 + 20*i/K.
  CHECK(p.next_means()[0] == doctest::Approx(10.0));
  CHECK(p.next_means()[149] == doctest::Approx(10.0 + 20.0 * 149 / 150));

  EnvironmentSpec trend;
  trend.family = Family::kKnownTrend;
  trend.num_arms = 150;
  trend.horizon = 5000;
  Environment t = build_environment(trend, TrialSeed{60, 1});
  // First pull carries trend value 1, so the next mean is the base mean.
  CHECK(t.next_means()[0] == doctest::Approx(0.1));
  CHECK(t.next_means()[149] == doctest::Approx(0.1 + 6.0 * 149 / 150));
}

TEST_CASE("mix blocks compose heterogeneous environments") {
  EnvironmentSpec env;
  env.num_arms = 7;
  env.horizon = 100;
  env.mix = {{Family::kIid, 3}, {Family::kRotting, 4}};
  Environment built = build_environment(env, TrialSeed{50, 0});
  CHECK(built.arm(0).family() == Family::kIid);
  CHECK(built.arm(2).family() == Family::kIid);
  CHECK(built.arm(3).family() == Family::kRotting);
  CHECK(built.arm(6).family() == Family::kRotting);

  env.mix = {{Family::kIid, 3}};
  CHECK_THROWS_AS(build_environment(env, TrialSeed{50, 0}), ConfigError);
}
