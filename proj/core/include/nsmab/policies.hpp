#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nsmab/arm_history.hpp"
#include "nsmab/environment.hpp"
#include "nsmab/rng.hpp"
#include "nsmab/weights.hpp"

namespace nsmab {

// First occurrence of the maximum wins, for reproducibility.
int argmax_lowest_index(std::span<const double> values);

// Rounds 1..K pull each arm once before any index rule runs.
int round_robin_arm(long round, int num_arms);

class Policy {
 public:
  virtual ~Policy() = default;

  // Chooses the arm to pull at the given 1-based global round.
  virtual int select(long round, const std::vector<ArmHistory>& histories) = 0;

  // Feedback for the pull made this round. Index policies read the shared
  // histories instead and ignore this.
  virtual void observe(int /*arm*/, double /*reward*/) {}

  virtual const WeightAudit* weight_audit() const { return nullptr; }
};

// Index rule: weighted mean + (C + 1) * ||q|| * sqrt(2 log t). C budgets the
// (unknown but bounded) discrepancy of the scheme/process pairing; C = 0
// with uniform weights on i.i.d. arms is classical UCB.
class WeightedUcbPolicy : public Policy {
 public:
  WeightedUcbPolicy(double exploration_c, std::vector<WeightScheme> schemes);

  std::vector<double> indices(double round, const std::vector<ArmHistory>& histories);
  int select(long round, const std::vector<ArmHistory>& histories) override;
  const WeightAudit* weight_audit() const override { return &audit_; }

 private:
  double exploration_c_;
  std::vector<WeightScheme> schemes_;
  WeightAudit audit_;
};

// Index rule with the exact discrepancy supplied by an environment oracle:
// weighted mean + D + ||q|| * sqrt(2 log t).
class DiscUcbPolicy : public Policy {
 public:
  DiscUcbPolicy(std::vector<WeightScheme> schemes, const Environment* oracle);

  std::vector<double> indices(double round, const std::vector<ArmHistory>& histories);
  int select(long round, const std::vector<ArmHistory>& histories) override;
  const WeightAudit* weight_audit() const override { return &audit_; }

 private:
  std::vector<WeightScheme> schemes_;
  const Environment* oracle_;
  WeightAudit audit_;
};

// WeightedUCB with C = 0 and uniform weights.
class Ucb1Policy : public Policy {
 public:
  explicit Ucb1Policy(int num_arms);

  std::vector<double> indices(double round, const std::vector<ArmHistory>& histories) {
    return inner_.indices(round, histories);
  }
  int select(long round, const std::vector<ArmHistory>& histories) override {
    return inner_.select(round, histories);
  }
  const WeightAudit* weight_audit() const override { return inner_.weight_audit(); }

 private:
  WeightedUcbPolicy inner_;
};

// Exponential-weights baseline with importance-weighted updates and uniform
// exploration mixing:
//   p_i = (1 - gamma) * w_i / sum(w) + gamma / K,   w_i = exp(eta * S_i),
// where S_i accumulates importance-weighted rewards mapped affinely into
// [0,1] via reward_range (clipped and counted if outside). Scores are kept
// additively so weights cannot overflow.
class Exp3Policy : public Policy {
 public:
  Exp3Policy(int num_arms, double eta, double mixing,
             std::pair<double, double> reward_range, RandomStream rng);

  // Default learning rate without mixing: sqrt(2 log K / (T K)).
  static double default_eta(int num_arms, long horizon);
  // The classic horizon-tuned mixing gamma = min(1, sqrt(K log K / ((e-1) T)));
  // pairs with eta = gamma / K. The experiment panels use this variant.
  static double classic_mixing(int num_arms, long horizon);

  std::vector<double> probabilities() const;
  int select(long round, const std::vector<ArmHistory>& histories) override;
  void observe(int arm, double reward) override;

  long clip_count() const { return clip_count_; }

 private:
  double eta_;
  double mixing_;
  std::pair<double, double> range_;
  std::vector<double> scores_;
  RandomStream rng_;
  long clip_count_ = 0;
};

// --- Declarative policy description ------------------------------------

enum class PolicyKind { kWeightedUcb, kDiscUcb, kExp3, kUcb1 };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kWeightedUcb;
  double exploration_c = 0.0;
  // nullopt: one matched scheme per arm, from the environment family.
  std::optional<WeightScheme> scheme;
  // Applied to trend/phase matching schemes after resolution: match the
  // upcoming pull's phase (default) or the latest one.
  bool match_next = true;
  // nullopt: Exp3Policy::default_eta / default_mixing.
  std::optional<double> eta;
  std::optional<double> exp3_mixing;
  // nullopt: environment reward bounds.
  std::optional<std::pair<double, double>> reward_range;
};

// Resolves defaults against the environment (matched schemes, eta, reward
// range). DiscUCB keeps a handle to `env` as its discrepancy oracle.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Environment& env,
                                    long horizon, RandomStream policy_rng);

}  // namespace nsmab
