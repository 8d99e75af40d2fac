#pragma once

#include <cstddef>

namespace nsmab {

// Neumaier compensated accumulator. Used where sums feed tight tolerance
// checks (weight validation, discrepancy oracle); plain loops elsewhere.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= x ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace nsmab
