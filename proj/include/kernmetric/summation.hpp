#pragma once

#include <cmath>
#include <cstddef>

namespace kernmetric {

// Left-to-right accumulator. With compensation enabled it runs Neumaier's
// variant of Kahan summation.
class Accumulator {
 public:
  explicit Accumulator(bool compensated = false) : compensated_(compensated) {}

  void add(double v) {
    if (!compensated_) {
      sum_ += v;
      return;
    }
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }

 private:
  bool compensated_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Double sums over more terms than this use compensated summation.
inline constexpr std::size_t kCompensationThreshold = 10000;

inline bool needs_compensation(std::size_t rows, std::size_t cols) {
  return rows * cols > kCompensationThreshold;
}

}  // namespace kernmetric
