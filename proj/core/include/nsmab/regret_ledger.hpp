#pragma once

#include <vector>

#include "nsmab/errors.hpp"

namespace nsmab {

// Conditional-mean gap between the current best arm and a given arm;
// nonnegative whenever the reference is the argmax arm.
struct Gap {
  double value = 0.0;
};

Gap gap_to_best(const std::vector<double>& next_means, int arm);

// Running regret accounting against the environment's conditional next-pull
// means. Two ledgers are kept per round:
//   delta_reg - sum over rounds of (best mean - chosen mean), nondecreasing;
//   reg       - best single arm's mean sum minus the chosen mean sum,
//               which delta_reg dominates and which can go negative.
// reg is accumulated as per-round differences so that delta_reg >= reg holds
// under floating-point rounding, not just algebraically.
class RegretLedger {
 public:
  explicit RegretLedger(int num_arms);

  // Appends one round: next_means are the K conditional means snapshotted
  // before the pull, chosen the pulled arm, realized_reward its sample.
  void update(const std::vector<double>& next_means, int chosen, double realized_reward);

  long round() const { return round_; }
  int num_arms() const { return num_arms_; }
  double delta_reg() const { return delta_reg_; }
  double cum_reward() const { return cum_reward_; }

  // max over arms of the accumulated (arm mean - chosen mean) differences.
  double path_dependent_reg() const;

  // Full per-arm mean history, mean_trace()[i][t-1] = m_i(t).
  const std::vector<std::vector<double>>& mean_trace() const { return mean_trace_; }
  const std::vector<double>& chosen_means() const { return chosen_means_; }

 private:
  int num_arms_;
  long round_ = 0;
  double delta_reg_ = 0.0;
  double cum_reward_ = 0.0;
  std::vector<std::vector<double>> mean_trace_;
  std::vector<double> chosen_means_;
  std::vector<double> diff_sums_;
};

}  // namespace nsmab
