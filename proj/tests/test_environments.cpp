#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsmab/engine.hpp"
#include "nsmab/environment.hpp"
#include "nsmab/rng.hpp"
#include "nsmab/summation.hpp"
#include "nsmab/weights.hpp"

using namespace nsmab;

namespace {

ArmHistory pull_n(Environment& env, int arm, long n, ArmHistory h = ArmHistory(0)) {
  const long start = static_cast<long>(h.pull_count());
  for (long s = 1; s <= n; ++s) h.add(start + s, env.pull(arm));
  return h;
}

// Closed form for the rotting family under uniform weights:
// (k+1)^-theta - (1/k) * sum_{s=1..k} s^-theta.
double rotting_uniform_discrepancy(long k, double theta) {
  CompensatedSum sum;
  for (long s = 1; s <= k; ++s) sum.add(std::pow(static_cast<double>(s), -theta));
  return std::pow(static_cast<double>(k + 1), -theta) - sum.value() / static_cast<double>(k);
}

// Stationary distribution by power iteration, independent of the chain code.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * rows[i][j];
    }
    pi = next;
  }
  return pi;
}

}  // namespace

TEST_CASE("a degenerate Bernoulli arm always pays one") {
  Environment env = make_mixed({IidArmSpec{1.0}}, TrialSeed{1, 0});
  for (int i = 0; i < 20; ++i) CHECK(env.pull(0) == 1.0);
}

TEST_CASE("complete dependence repeats the first draw forever") {
  Environment env = make_mixed({CompleteDependenceArmSpec{0.5}}, TrialSeed{2, 0});
  const double first = env.pull(0);
  for (int i = 0; i < 20; ++i) CHECK(env.pull(0) == first);
  CHECK(env.next_means()[0] == first);
}

TEST_CASE("second-pull mean of a unit-exponent rotting arm is one half") {
  // Monte-Carlo across fresh arms against the closed-form mean.
  long hits = 0;
  const long reps = 100000;
  for (long r = 0; r < reps; ++r) {
    Environment env = make_mixed({RottingArmSpec{1.0, 0.0}}, TrialSeed{3, static_cast<std::uint64_t>(r)});
    env.pull(0);
    hits += env.pull(0) == 1.0 ? 1 : 0;
  }
  const double mean = static_cast<double>(hits) / reps;
  CHECK(std::fabs(mean - 0.5) <= 0.01);
}

TEST_CASE("next means report without advancing state") {
  Environment env = make_mixed({IidArmSpec{0.1}, IidArmSpec{0.5}, IidArmSpec{0.9}},
                               TrialSeed{4, 0});
  const std::vector<double> expect = {0.1, 0.5, 0.9};
  for (int repeat = 0; repeat < 5; ++repeat) {
    CHECK(env.next_means() == expect);
  }
}

TEST_CASE("rotting next mean follows the pull count") {
  Environment env = make_mixed({RottingArmSpec{1.0, 0.0}}, TrialSeed{5, 0});
  pull_n(env, 0, 3);
  CHECK(env.next_means()[0] == doctest::Approx(0.25).epsilon(1e-12));
  Environment env2 = make_mixed({RottingArmSpec{0.1, 0.0}}, TrialSeed{5, 1});
  CHECK(env2.next_means()[0] == doctest::Approx(1.0));
  Environment env5 = make_mixed({RottingArmSpec{1.0, 0.0}}, TrialSeed{5, 2});
  pull_n(env5, 0, 4);
  CHECK(env5.next_means()[0] == doctest::Approx(0.2));
}

TEST_CASE("markov next mean is one transition step from the last state") {
  MarkovArmSpec spec;
  spec.transition = {{0.9, 0.1}, {0.2, 0.8}};
  spec.state_rewards = {0.0, 1.0};
  spec.initial_state = 1;
  Environment env = make_mixed({spec}, TrialSeed{6, 0});
  CHECK(env.next_means()[0] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("iid discrepancy vanishes for any distribution") {
  Environment env = make_mixed({IidArmSpec{0.37}}, TrialSeed{7, 0});
  auto h = pull_n(env, 0, 50);
  RandomStream rng(1);
  std::vector<double> w(50);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform01_open();
    total += x;
  }
  for (double& x : w) x /= total;
  CHECK(std::fabs(env.discrepancy(0, WeightVector::from_weights(w))) <= 1e-12);
}

TEST_CASE("rotting uniform discrepancy matches the closed form") {
  Environment env = make_mixed({RottingArmSpec{1.0, 0.0}}, TrialSeed{8, 0});
  auto h = pull_n(env, 0, 2);
  const double d = env.discrepancy(0, uniform_weights(h));
  CHECK(d == doctest::Approx(-5.0 / 12).epsilon(1e-12));

  for (double theta : {0.5, 1.0, 2.0}) {
    Environment e2 = make_mixed({RottingArmSpec{theta, 0.0}}, TrialSeed{8, 1});
    ArmHistory hist(0);
    for (long k = 1; k <= 100; ++k) {
      hist.add(k, e2.pull(0));
      const double got = e2.discrepancy(0, uniform_weights(hist));
      CHECK(std::fabs(got - rotting_uniform_discrepancy(k, theta)) <= 1e-10);
    }
  }
}

TEST_CASE("rotting uniform discrepancy stays exact at ten thousand pulls") {
  Environment env = make_mixed({RottingArmSpec{0.5, 0.0}}, TrialSeed{8, 2});
  auto h = pull_n(env, 0, 10000);
  const double got = env.discrepancy(0, uniform_weights(h));
  CHECK(std::fabs(got - rotting_uniform_discrepancy(10000, 0.5)) <= 1e-10);
}

TEST_CASE("since-change weights cancel the rarely-changing discrepancy") {
  Environment env = make_rarely_changing(1, 400, TrialSeed{70, 2});
  const auto& arm = dynamic_cast<const RarelyChangingArm&>(env.arm(0));
  auto h = pull_n(env, 0, 123);
  for (long n = 123;; ++n) {
    try {
      const auto q = since_change_weights(h, arm.change_points());
      CHECK(std::fabs(env.discrepancy(0, q)) <= 1e-12);
      break;
    } catch (const NoSupportError&) {
      h.add(n + 1, env.pull(0));  // the upcoming pull opened a fresh segment
    }
  }
}

TEST_CASE("discrepancy oracle validates its inputs") {
  Environment env = make_mixed({IidArmSpec{0.5}}, TrialSeed{9, 0});
  CHECK_THROWS_AS(env.discrepancy(0, WeightVector::from_weights({1.0})), EmptyHistoryError);
  env.pull(0);
  CHECK_THROWS_AS(env.discrepancy(0, WeightVector::from_weights({0.5, 0.5})),
                  ContractViolation);
}

TEST_CASE("iid factory lays out the mean ladder") {
  const TrialSeed seed{10, 0};
  Environment k4 = make_iid(4, seed);
  CHECK(k4.next_means() == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  Environment k1 = make_iid(1, seed);
  CHECK(k1.next_means() == std::vector<double>{1.0});
  Environment k150 = make_iid(150, seed);
  CHECK(k150.next_means()[0] == doctest::Approx(1.0 / 150));
  CHECK(k150.next_means()[149] == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_iid(0, seed), ConfigError);
}

TEST_CASE("rotting factory uses the documented exponent ladder") {
  Environment env = make_rotting(150, TrialSeed{11, 0});
  for (int i : {0, 1, 15, 149}) {
    const auto& arm = dynamic_cast<const RottingArm&>(env.arm(i));
    CHECK(arm.theta() == doctest::Approx(0.1 + 10.0 * i / 150).epsilon(1e-12));
  }
}

TEST_CASE("rarely changing arms space their changes evenly") {
  // Scan trials until an arm draws exactly two segments over horizon 100;
  // its single interior change must sit at pull 51.
  bool seen_two = false;
  bool seen_one = false;
  for (std::uint64_t trial = 0; trial < 64 && !(seen_two && seen_one); ++trial) {
    Environment env = make_rarely_changing(1, 100, TrialSeed{12, trial});
    const auto& arm = dynamic_cast<const RarelyChangingArm&>(env.arm(0));
    if (arm.change_points().size() == 2) {
      CHECK(arm.change_points() == std::vector<long>{1, 51});
      seen_two = true;
    }
    if (arm.change_points().size() == 1) {
      // Single segment: an iid arm; the mean never moves.
      const double m = env.next_means()[0];
      pull_n(env, 0, 25);
      CHECK(env.next_means()[0] == m);
      seen_one = true;
    }
  }
  CHECK(seen_two);
  CHECK(seen_one);
}

TEST_CASE("rarely changing draws are reproducible for a fixed seed") {
  Environment a = make_rarely_changing(3, 200, TrialSeed{13, 5});
  Environment b = make_rarely_changing(3, 200, TrialSeed{13, 5});
  for (int i = 0; i < 3; ++i) {
    for (int s = 0; s < 40; ++s) CHECK(a.pull(i) == b.pull(i));
  }
}

TEST_CASE("rotting with jumps restarts the decay at change points") {
  // Single segment with zero baseline reduces to plain rotting.
  Environment plain = make_rotting_jumps(1, {0.0}, {1}, 1.0, TrialSeed{14, 0});
  for (long s = 1; s <= 5; ++s) {
    CHECK(plain.next_means()[0] == doctest::Approx(1.0 / s).epsilon(1e-12));
    plain.pull(0);
  }

  // Jump at pull 4 with baseline 0.3 restarts the decay at full height.
  Environment env = make_rotting_jumps(1, {0.0, 0.3}, {1, 4}, 1.0, TrialSeed{14, 1});
  pull_n(env, 0, 3);
  CHECK(env.next_means()[0] == doctest::Approx(1.3).epsilon(1e-12));

  CHECK_THROWS_AS(make_rotting_jumps(1, {0.0, 0.1}, {4, 2}, 1.0, TrialSeed{14, 2}),
                  ConfigError);
}

TEST_CASE("within a constant segment the jump discrepancy matches plain rotting") {
  Environment env = make_rotting_jumps(1, {0.2, 0.2}, {1, 6}, 1.0, TrialSeed{15, 0});
  auto h = pull_n(env, 0, 9);  // pulls 6..9 sit in the second segment
  const auto q = since_change_weights(h, {1, 6});
  // Window holds pulls 6..9: decay offsets 1..4, upcoming offset 5; the
  // constant baseline cancels.
  const double d = env.discrepancy(0, q);
  CHECK(d == doctest::Approx(rotting_uniform_discrepancy(4, 1.0)).epsilon(1e-10));
}

TEST_CASE("markov chains validate and emit state rewards") {
  MarkovArmSpec identity;
  identity.transition = {{1.0, 0.0}, {0.0, 1.0}};
  identity.state_rewards = {0.25, 0.75};
  Environment env = make_mixed({identity}, TrialSeed{16, 0});
  for (int i = 0; i < 10; ++i) CHECK(env.pull(0) == 0.25);

  MarkovArmSpec uniform2;
  uniform2.transition = {{0.5, 0.5}, {0.5, 0.5}};
  uniform2.state_rewards = {0.0, 1.0};
  Environment u = make_mixed({uniform2}, TrialSeed{16, 1});
  for (int i = 0; i < 5; ++i) {
    CHECK(u.next_means()[0] == doctest::Approx(0.5));
    u.pull(0);
  }

  MarkovArmSpec bad = identity;
  bad.transition = {{0.9, 0.2}, {0.0, 1.0}};
  CHECK_THROWS_AS(make_mixed({bad}, TrialSeed{16, 2}), ConfigError);
  MarkovArmSpec dup = identity;
  dup.state_rewards = {0.5, 0.5};
  CHECK_THROWS_AS(make_mixed({dup}, TrialSeed{16, 3}), ConfigError);
}

TEST_CASE("markov state frequencies approach the stationary distribution") {
  const std::vector<std::vector<double>> rows = {{0.7, 0.3}, {0.15, 0.85}};
  MarkovArmSpec spec;
  spec.transition = rows;
  spec.state_rewards = {0.0, 1.0};
  Environment env = make_mixed({spec}, TrialSeed{17, 0});
  long ones = 0;
  const long n = 100000;
  for (long s = 0; s < n; ++s) ones += env.pull(0) == 1.0 ? 1 : 0;
  const auto pi = stationary_distribution(rows);
  CHECK(std::fabs(static_cast<double>(ones) / n - pi[1]) <= 0.01);
}

TEST_CASE("periodic arms cycle their block means") {
  PeriodicArmSpec spec;
  spec.block_length = 50;
  spec.period_means = {2.0, 5.0, 1.0};
  spec.sigma = 0.3;
  Environment env = make_mixed({spec}, TrialSeed{18, 0});
  for (long s = 1; s <= 150; ++s) {
    const double expect = spec.period_means[static_cast<std::size_t>(((s - 1) / 50) % 3)];
    CHECK(env.next_means()[0] == expect);
    env.pull(0);
  }
  // After a full cycle the pattern repeats.
  CHECK(env.next_means()[0] == 2.0);

  PeriodicArmSpec single;
  single.block_length = 1;
  single.period_means = {4.0};
  Environment sgl = make_mixed({single}, TrialSeed{18, 1});
  pull_n(sgl, 0, 10);
  CHECK(sgl.next_means()[0] == 4.0);

  PeriodicArmSpec empty;
  empty.period_means = {};
  CHECK_THROWS_AS(make_mixed({empty}, TrialSeed{18, 2}), ConfigError);
}

TEST_CASE("trend arms scale a fixed base mean by the known cycle") {
  KnownTrendArmSpec spec;
  spec.base_mean = 2.0;
  spec.trend_table = {0.1, 1.0, 3.0};
  Environment env = make_mixed({spec}, TrialSeed{19, 0});
  pull_n(env, 0, 1);  // upcoming pull index 2, trend value 3
  CHECK(env.next_means()[0] == doctest::Approx(6.0).epsilon(1e-12));

  KnownTrendArmSpec flat;
  flat.base_mean = 1.5;
  flat.trend_table = {1.0};
  Environment f = make_mixed({flat}, TrialSeed{19, 1});
  pull_n(f, 0, 7);
  CHECK(f.next_means()[0] == doctest::Approx(1.5));
}

TEST_CASE("trend-matched weights zero out the trend discrepancy") {
  KnownTrendArmSpec spec;
  spec.base_mean = 3.3;
  spec.trend_table = {0.1, 1.0, 3.0};
  Environment env = make_mixed({spec}, TrialSeed{20, 0});
  auto h = pull_n(env, 0, 100);
  const auto q = trend_matched_weights(h, spec.trend_table);
  CHECK(std::fabs(env.discrepancy(0, q)) <= 1e-12);
}

TEST_CASE("drifting arms take bounded steps and stay in the unit interval") {
  const long horizon = 5000;
  const double step = std::pow(static_cast<double>(horizon), -2.0 / 3.0);
  CHECK(step == doctest::Approx(3.42e-3).epsilon(1e-2));

  Environment env = make_drifting(1, horizon, TrialSeed{21, 0});
  double prev = env.next_means()[0];
  for (int s = 0; s < 2000; ++s) {
    env.pull(0);
    const double cur = env.next_means()[0];
    // Exactly one step per pull unless the walk got clipped at a boundary.
    const bool full_step = std::fabs(std::fabs(cur - prev) - step) <= 1e-15;
    const bool clipped = cur == 0.0 || cur == 1.0;
    CHECK((full_step || clipped));
    CHECK(std::fabs(cur - prev) <= step + 1e-15);
    CHECK(cur >= 0.0);
    CHECK(cur <= 1.0);
    prev = cur;
  }
}

TEST_CASE("mixed environments dispatch per arm") {
  Environment env = make_mixed({IidArmSpec{0.5}, RottingArmSpec{1.0, 0.0}}, TrialSeed{22, 0});
  CHECK(env.next_means() == std::vector<double>{0.5, 1.0});
  CHECK(env.arm(0).family() == Family::kIid);
  CHECK(env.arm(1).family() == Family::kRotting);
}

TEST_CASE("an all-iid mixture is the iid environment") {
  const TrialSeed seed{23, 0};
  std::vector<ArmSpec> specs;
  for (int i = 0; i < 4; ++i) specs.push_back(IidArmSpec{(i + 1) / 4.0});
  Environment mixed = make_mixed(specs, seed);
  Environment plain = make_iid(4, seed);
  CHECK(mixed.next_means() == plain.next_means());
  for (int i = 0; i < 4; ++i) {
    CHECK(mixed.arm(i).family() == plain.arm(i).family());
    for (int s = 0; s < 30; ++s) CHECK(mixed.pull(i) == plain.pull(i));
  }
}

TEST_CASE("mixed arms agree with their pure-family counterparts") {
  const TrialSeed seed{24, 0};
  MarkovArmSpec markov;
  markov.transition = {{0.6, 0.4}, {0.3, 0.7}};
  markov.state_rewards = {0.0, 1.0};
  Environment mixed = make_mixed({markov, RottingArmSpec{0.7, 0.0}}, seed);
  Environment pure_markov = make_mixed({markov, markov}, seed);
  Environment pure_rotting = make_mixed({RottingArmSpec{0.7, 0.0}, RottingArmSpec{0.7, 0.0}},
                                        seed);

  // Same per-arm streams and same pull sequences: the oracles must agree.
  auto hm = pull_n(mixed, 0, 60);
  auto hp = pull_n(pure_markov, 0, 60);
  for (std::size_t s = 0; s < 60; ++s) REQUIRE(hm.reward(s) == hp.reward(s));
  const auto qm = state_matched_weights(hm, hm.last_reward());
  CHECK(mixed.discrepancy(0, qm) == pure_markov.discrepancy(0, qm));

  auto hr = pull_n(mixed, 1, 60, ArmHistory(1));
  pull_n(pure_rotting, 1, 60, ArmHistory(1));
  const auto qr = uniform_weights(hr);
  CHECK(mixed.discrepancy(1, qr) == pure_rotting.discrepancy(1, qr));
}

TEST_CASE("pulling one arm never disturbs the others") {
  MarkovArmSpec markov;
  markov.transition = {{0.6, 0.4}, {0.3, 0.7}};
  markov.state_rewards = {0.0, 1.0};
  Environment env = make_mixed(
      {IidArmSpec{0.4}, markov, RottingArmSpec{1.0, 0.0}, DriftingArmSpec{100, 0.75}},
      TrialSeed{25, 0});
  pull_n(env, 1, 3);
  pull_n(env, 3, 3);
  const auto before = env.next_means();
  pull_n(env, 2, 25);
  const auto after = env.next_means();
  for (int i : {0, 1, 3}) CHECK(before[static_cast<std::size_t>(i)] == after[static_cast<std::size_t>(i)]);
}

TEST_CASE("identical seeds give identical reward streams for every family") {
  MarkovArmSpec markov;
  markov.transition = {{0.5, 0.5}, {0.2, 0.8}};
  markov.state_rewards = {0.0, 1.0};
  const std::vector<ArmSpec> specs = {
      IidArmSpec{0.3},        CompleteDependenceArmSpec{0.5},
      RottingArmSpec{0.8, 0}, RottingJumpsArmSpec{{0.1, 0.5}, {1, 10}, 1.0, 0.1},
      markov,                 RarelyChangingArmSpec{500},
      PeriodicArmSpec{5, {1.0, 2.0}, 0.3},
      KnownTrendArmSpec{1.0, {0.1, 1.0, 3.0}, 0.3},
      DriftingArmSpec{500, 0.75},
  };
  Environment a = make_mixed(specs, TrialSeed{26, 3});
  Environment b = make_mixed(specs, TrialSeed{26, 3});
  for (int i = 0; i < static_cast<int>(specs.size()); ++i) {
    for (int s = 0; s < 50; ++s) REQUIRE(a.pull(i) == b.pull(i));
  }
}

TEST_CASE("reward bounds cover each family's support") {
  MarkovArmSpec markov;
  markov.transition = {{0.5, 0.5}, {0.5, 0.5}};
  markov.state_rewards = {-2.0, 7.0};
  Environment env = make_mixed({markov}, TrialSeed{27, 0});
  CHECK(env.reward_bounds() == std::pair<double, double>{-2.0, 7.0});

  Environment iid = make_iid(3, TrialSeed{27, 1});
  CHECK(iid.reward_bounds() == std::pair<double, double>{0.0, 1.0});
}
