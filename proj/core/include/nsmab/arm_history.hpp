#pragma once

#include <cstddef>
#include <vector>

#include "nsmab/errors.hpp"

namespace nsmab {

struct PullRecord {
  long global_round;  // round at which the pull happened, 1-based
  double reward;      // the arm's s-th process value
};

// Per-arm record of pulls. The s-th entry (0-based s-1) is the arm's s-th
// observed reward; global rounds are strictly increasing.
class ArmHistory {
 public:
  ArmHistory() = default;
  explicit ArmHistory(int arm_id) : arm_id_(arm_id) {}

  void add(long global_round, double reward) {
    if (!pulls_.empty() && global_round <= pulls_.back().global_round) {
      throw ContractViolation("ArmHistory: global rounds must be strictly increasing");
    }
    pulls_.push_back({global_round, reward});
  }

  int arm_id() const { return arm_id_; }
  std::size_t pull_count() const { return pulls_.size(); }
  bool empty() const { return pulls_.empty(); }
  const std::vector<PullRecord>& pulls() const { return pulls_; }

  // 0-based access to the (s+1)-th reward.
  double reward(std::size_t s) const { return pulls_[s].reward; }
  double last_reward() const {
    if (pulls_.empty()) throw EmptyHistoryError("ArmHistory: no pulls yet");
    return pulls_.back().reward;
  }

 private:
  int arm_id_ = 0;
  std::vector<PullRecord> pulls_;
};

}  // namespace nsmab
