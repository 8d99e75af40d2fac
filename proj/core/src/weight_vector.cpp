#include "nsmab/weight_vector.hpp"

#include <cmath>
#include <string>

#include "nsmab/errors.hpp"
#include "nsmab/summation.hpp"

namespace nsmab {

WeightVector WeightVector::from_weights(std::vector<double> weights) {
  if (weights.empty()) {
    throw EmptyHistoryError("WeightVector: no pulls to distribute mass over");
  }
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (double w : weights) {
    if (!std::isfinite(w)) throw NumericError("WeightVector: non-finite weight");
    if (w < 0.0) throw ContractViolation("WeightVector: negative weight");
    sum.add(w);
    sum_sq.add(w * w);
  }
  const double total = sum.value();
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ContractViolation("WeightVector: weights sum to " + std::to_string(total) +
                            ", expected 1");
  }
  return WeightVector(std::move(weights), std::sqrt(sum_sq.value()));
}

double weighted_mean(const ArmHistory& history, const WeightVector& q) {
  if (history.empty()) throw EmptyHistoryError("weighted_mean: empty history");
  if (q.size() != history.pull_count()) {
    throw ContractViolation("weighted_mean: weight length " + std::to_string(q.size()) +
                            " != pull count " + std::to_string(history.pull_count()));
  }
  double acc = 0.0;
  for (std::size_t s = 0; s < q.size(); ++s) {
    acc += q[s] * history.reward(s);
  }
  return acc;
}

}  // namespace nsmab
