#pragma once

#include <cstddef>
#include <vector>

#include "nsmab/arm_history.hpp"

namespace nsmab {

// A probability distribution over an arm's past pulls, together with its
// Euclidean norm. The norm controls the width of the confidence term in the
// index policies, so it is computed once at construction and kept
// consistent with the weights by the factory.
class WeightVector {
 public:
  // Validates: nonnegative entries, unit sum within 1e-12, all finite.
  static WeightVector from_weights(std::vector<double> weights);

  const std::vector<double>& weights() const { return weights_; }
  double operator[](std::size_t s) const { return weights_[s]; }
  std::size_t size() const { return weights_.size(); }
  double norm2() const { return norm2_; }
  double norm2_squared() const { return norm2_ * norm2_; }

 private:
  WeightVector(std::vector<double> w, double n) : weights_(std::move(w)), norm2_(n) {}

  std::vector<double> weights_;
  double norm2_;
};

// q-weighted average of the observed rewards; lies between the smallest and
// largest observed reward.
double weighted_mean(const ArmHistory& history, const WeightVector& q);

}  // namespace nsmab
