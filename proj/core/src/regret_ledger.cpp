#include "nsmab/regret_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsmab {

Gap gap_to_best(const std::vector<double>& next_means, int arm) {
  if (arm < 0 || static_cast<std::size_t>(arm) >= next_means.size()) {
    throw ContractViolation("gap_to_best: arm out of range");
  }
  const double best = *std::max_element(next_means.begin(), next_means.end());
  return Gap{best - next_means[arm]};
}

RegretLedger::RegretLedger(int num_arms)
    : num_arms_(num_arms),
      mean_trace_(static_cast<std::size_t>(num_arms)),
      diff_sums_(static_cast<std::size_t>(num_arms), 0.0) {
  if (num_arms < 1) throw ContractViolation("RegretLedger: need at least one arm");
}

void RegretLedger::update(const std::vector<double>& next_means, int chosen,
                          double realized_reward) {
  if (static_cast<int>(next_means.size()) != num_arms_) {
    throw ContractViolation("RegretLedger: expected " + std::to_string(num_arms_) +
                            " means, got " + std::to_string(next_means.size()));
  }
  if (chosen < 0 || chosen >= num_arms_) {
    throw ContractViolation("RegretLedger: chosen arm out of range");
  }
  for (double m : next_means) {
    if (!std::isfinite(m)) throw NumericError("RegretLedger: non-finite mean");
  }
  if (!std::isfinite(realized_reward)) {
    throw NumericError("RegretLedger: non-finite reward");
  }

  const double chosen_mean = next_means[static_cast<std::size_t>(chosen)];
  const double best = *std::max_element(next_means.begin(), next_means.end());
  delta_reg_ += best - chosen_mean;
  cum_reward_ += realized_reward;
  for (int i = 0; i < num_arms_; ++i) {
    const double m = next_means[static_cast<std::size_t>(i)];
    mean_trace_[static_cast<std::size_t>(i)].push_back(m);
    diff_sums_[static_cast<std::size_t>(i)] += m - chosen_mean;
  }
  chosen_means_.push_back(chosen_mean);
  ++round_;
}

double RegretLedger::path_dependent_reg() const {
  if (round_ < 1) throw ContractViolation("RegretLedger: empty ledger");
  return *std::max_element(diff_sums_.begin(), diff_sums_.end());
}

}  // namespace nsmab
