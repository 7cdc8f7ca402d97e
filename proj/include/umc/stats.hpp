#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace umc {

/// Single-pass moment accumulator (Welford) with an attached work ledger.
/// Merging two accumulators matches accumulating the concatenation.
class RunningStats {
 public:
  void push(double value, std::uint64_t work = 0) {
    ++count_;
    const double delta = value - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (value - mean_);
    work_ += work;
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / (na + nb);
    m2_ += other.m2_ + delta * delta * na * nb / (na + nb);
    count_ += other.count_;
    work_ += other.work_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  std::uint64_t work_total() const { return work_; }

  double sample_variance() const {
    if (count_ < 2) {
      throw std::domain_error("sample_variance: needs at least two samples");
    }
    return m2_ / static_cast<double>(count_ - 1);
  }

  double sample_stddev() const { return std::sqrt(sample_variance()); }

  /// sqrt( M2 / (n (n-1)) ): the sample RMSE of the sample mean.
  double sample_rmse_of_mean() const {
    if (count_ < 2) {
      throw std::domain_error("sample_rmse_of_mean: undefined for fewer than two samples");
    }
    const double n = static_cast<double>(count_);
    return std::sqrt(m2_ / (n * (n - 1.0)));
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::uint64_t work_ = 0;
};

}  // namespace umc
