#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "nsmab/rng.hpp"
#include "nsmab/weight_vector.hpp"
#include "nsmab/weights.hpp"

namespace nsmab {

enum class Family {
  kIid,
  kCompleteDependence,
  kRotting,
  kRottingJumps,
  kMarkov,
  kRarelyChanging,
  kPeriodic,
  kKnownTrend,
  kDrifting,
};

// One rested stochastic process. State advances only through pull(); the
// conditional mean of the upcoming pull is always available without side
// effects. The mean that generated each past pull is recorded at pull time,
// which makes the discrepancy oracle exact even for path-dependent families.
class ArmProcess {
 public:
  explicit ArmProcess(RandomStream rng) : rng_(std::move(rng)) {}
  virtual ~ArmProcess() = default;

  double pull() {
    const double m = next_mean();
    const double x = sample_and_advance(m);
    means_at_pulls_.push_back(m);
    return x;
  }

  // Conditional mean of the upcoming pull given the arm's own past. Pure.
  virtual double next_mean() const = 0;

  virtual Family family() const = 0;

  // The weight construction that pairs with this family.
  virtual WeightScheme matched_scheme() const { return WeightScheme::uniform(); }

  // Conservative support of the reward distribution, for reward scaling.
  virtual std::pair<double, double> reward_bounds() const = 0;

  std::size_t pull_count() const { return means_at_pulls_.size(); }
  long next_pull_index() const { return static_cast<long>(pull_count()) + 1; }

  // means_at_pulls()[s] is the conditional mean that held just before the
  // (s+1)-th pull.
  const std::vector<double>& means_at_pulls() const { return means_at_pulls_; }

 protected:
  // Draw the reward for a pull whose conditional mean is `mean`, then move
  // the family-specific local state forward.
  virtual double sample_and_advance(double mean) = 0;

  RandomStream rng_;

 private:
  std::vector<double> means_at_pulls_;
};

// --- Process families --------------------------------------------------

class IidArm final : public ArmProcess {
 public:
  IidArm(double mean, RandomStream rng);
  double next_mean() const override { return mean_; }
  Family family() const override { return Family::kIid; }
  std::pair<double, double> reward_bounds() const override { return {0.0, 1.0}; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  double mean_;
};

// Fully correlated rewards: the first draw repeats forever.
class CompleteDependenceArm final : public ArmProcess {
 public:
  CompleteDependenceArm(double mean, RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kCompleteDependence; }
  std::pair<double, double> reward_bounds() const override { return {0.0, 1.0}; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  double mean_;
  bool frozen_ = false;
  double first_value_ = 0.0;
};

// Bernoulli rewards whose mean decays as (pull count)^-theta, optionally
// shifted by a baseline; the mean is clipped into [0, 1].
class RottingArm final : public ArmProcess {
 public:
  RottingArm(double theta, double baseline, RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kRotting; }
  std::pair<double, double> reward_bounds() const override { return {0.0, 1.0}; }
  double theta() const { return theta_; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  double theta_;
  double baseline_;
};

// Rotting decay restarted at known change points, on top of per-segment
// baselines; Gaussian rewards.
class RottingJumpsArm final : public ArmProcess {
 public:
  RottingJumpsArm(std::vector<double> segment_means, std::vector<long> change_points,
                  double theta, double sigma, RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kRottingJumps; }
  WeightScheme matched_scheme() const override {
    return WeightScheme::since_change(change_points_);
  }
  std::pair<double, double> reward_bounds() const override;

 protected:
  double sample_and_advance(double mean) override;

 private:
  std::vector<double> segment_means_;
  std::vector<long> change_points_;  // pull indices, first entry 1
  double theta_;
  double sigma_;
};

// Finite Markov chain; a pull transitions from the last emitted state and
// emits the reward of the state reached. State values must be distinct so
// that an emitted reward identifies the state.
class MarkovArm final : public ArmProcess {
 public:
  MarkovArm(std::vector<std::vector<double>> transition, std::vector<double> state_rewards,
            int initial_state, RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kMarkov; }
  WeightScheme matched_scheme() const override { return WeightScheme::state_matched(); }
  std::pair<double, double> reward_bounds() const override;
  int current_state() const { return state_; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  std::vector<std::vector<double>> transition_;
  std::vector<double> state_rewards_;
  int state_;
};

// Piecewise-constant means with known change points; Gaussian rewards.
class RarelyChangingArm final : public ArmProcess {
 public:
  RarelyChangingArm(std::vector<double> segment_means, std::vector<long> change_points,
                    double sigma, RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kRarelyChanging; }
  WeightScheme matched_scheme() const override {
    return WeightScheme::since_change(change_points_);
  }
  std::pair<double, double> reward_bounds() const override;
  const std::vector<long>& change_points() const { return change_points_; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  std::vector<double> segment_means_;
  std::vector<long> change_points_;
  double sigma_;
};

// Means cycling through per-period values in blocks of block_length pulls;
// Gaussian rewards.
class PeriodicArm final : public ArmProcess {
 public:
  PeriodicArm(long block_length, std::vector<double> period_means, double sigma,
              RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kPeriodic; }
  WeightScheme matched_scheme() const override {
    return WeightScheme::phase_matched(static_cast<long>(period_means_.size()),
                                       block_length_);
  }
  std::pair<double, double> reward_bounds() const override;

 protected:
  double sample_and_advance(double mean) override;

 private:
  long block_length_;
  std::vector<double> period_means_;
  double sigma_;
};

// Gaussian base draws scaled by a known trend value that cycles with the
// pull index.
class KnownTrendArm final : public ArmProcess {
 public:
  KnownTrendArm(double base_mean, std::vector<double> trend_table, double sigma,
                RandomStream rng);
  double next_mean() const override;
  Family family() const override { return Family::kKnownTrend; }
  WeightScheme matched_scheme() const override {
    return WeightScheme::trend_matched(trend_table_);
  }
  std::pair<double, double> reward_bounds() const override;

 protected:
  double sample_and_advance(double mean) override;

 private:
  double base_mean_;
  std::vector<double> trend_table_;
  double sigma_;
};

// Bernoulli mean performing a +-step random walk on each pull, clipped to
// [0, 1]; the step is horizon^(-2/3).
class DriftingArm final : public ArmProcess {
 public:
  DriftingArm(double initial_mean, double step, double window_gamma, RandomStream rng);
  double next_mean() const override { return mean_; }
  Family family() const override { return Family::kDrifting; }
  WeightScheme matched_scheme() const override {
    return WeightScheme::recent_window(window_gamma_);
  }
  std::pair<double, double> reward_bounds() const override { return {0.0, 1.0}; }
  double drift_step() const { return step_; }

 protected:
  double sample_and_advance(double mean) override;

 private:
  double mean_;
  double step_;
  double window_gamma_;
};

// --- Declarative per-arm specs ------------------------------------------

struct IidArmSpec {
  double mean = 0.5;
};
struct CompleteDependenceArmSpec {
  double mean = 0.5;
};
struct RottingArmSpec {
  double theta = 1.0;
  double baseline = 0.0;
};
struct RottingJumpsArmSpec {
  std::vector<double> segment_means;
  std::vector<long> change_points;
  double theta = 1.0;
  double sigma = 0.1;
};
struct MarkovArmSpec {
  std::vector<std::vector<double>> transition;
  std::vector<double> state_rewards;
  int initial_state = 0;
};
// Segment count, means and change points are drawn from the arm's stream.
struct RarelyChangingArmSpec {
  long horizon = 1;
};
struct PeriodicArmSpec {
  long block_length = 1;
  std::vector<double> period_means;
  double sigma = 0.3;
};
struct KnownTrendArmSpec {
  double base_mean = 1.0;
  std::vector<double> trend_table;
  double sigma = 0.3;
};
// The initial mean is drawn from the arm's stream.
struct DriftingArmSpec {
  long horizon = 1;
  double window_gamma = 0.75;
};

using ArmSpec = std::variant<IidArmSpec, CompleteDependenceArmSpec, RottingArmSpec,
                             RottingJumpsArmSpec, MarkovArmSpec, RarelyChangingArmSpec,
                             PeriodicArmSpec, KnownTrendArmSpec, DriftingArmSpec>;

std::unique_ptr<ArmProcess> make_arm(const ArmSpec& spec, RandomStream rng);

// --- Environment ---------------------------------------------------------

// A bundle of mutually independent rested arms, each on its own random
// stream. Belongs to exactly one trial.
class Environment {
 public:
  explicit Environment(std::vector<std::unique_ptr<ArmProcess>> arms);

  int num_arms() const { return static_cast<int>(arms_.size()); }

  // Samples the arm's next process value; advances only that arm.
  double pull(int arm);

  // Conditional next-pull means of all arms. No side effects.
  std::vector<double> next_means() const;

  // Exact weighted discrepancy for the arm's upcoming pull:
  // next_mean - sum_s q(s) * (mean that generated the s-th pull).
  double discrepancy(int arm, const WeightVector& q) const;

  WeightScheme matched_scheme(int arm) const;
  std::pair<double, double> reward_bounds() const;

  const ArmProcess& arm(int i) const { return *arms_[static_cast<std::size_t>(i)]; }

 private:
  void check_arm(int arm) const;
  std::vector<std::unique_ptr<ArmProcess>> arms_;
};

// --- Factories -----------------------------------------------------------

Environment make_mixed(const std::vector<ArmSpec>& specs, const TrialSeed& seed);

// Bernoulli arms with means (i+1)/K.
Environment make_iid(int num_arms, const TrialSeed& seed);

// Per arm: 1-10 segments with Uniform(0,1) means, change points evenly
// spaced over the horizon, Normal(mean, 0.1) rewards.
Environment make_rarely_changing(int num_arms, long horizon, const TrialSeed& seed);

// Bernoulli arms decaying as (pull count)^-theta_i, theta_i = 0.1 + 10*i/K.
Environment make_rotting(int num_arms, const TrialSeed& seed);

// All arms share the given segment structure.
Environment make_rotting_jumps(int num_arms, std::vector<double> segment_means,
                               std::vector<long> change_points, double theta,
                               const TrialSeed& seed, double sigma = 0.1);

Environment make_markov(int num_arms, std::vector<std::vector<std::vector<double>>> transitions,
                        std::vector<std::vector<double>> state_rewards, const TrialSeed& seed,
                        int initial_state = 0);

// period_means[i] holds arm i's per-period means.
Environment make_periodic(int num_arms, long period_length,
                          std::vector<std::vector<double>> period_means,
                          const TrialSeed& seed, double sigma = 0.3);

Environment make_trend(int num_arms, std::vector<double> base_means,
                       std::vector<double> trend_table, const TrialSeed& seed,
                       double sigma = 0.3);

// Initial means Uniform(1 - 1/sqrt(T), 1 + 1/sqrt(T)) clipped to [0, 1],
// step T^(-2/3).
Environment make_drifting(int num_arms, long horizon, const TrialSeed& seed);

}  // namespace nsmab
