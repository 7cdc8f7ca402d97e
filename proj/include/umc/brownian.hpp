#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <umc/rng.hpp>

namespace umc {

/// Brownian path on the dyadic grid {j * T * 2^-n : j = 0..2^n}, refinable in
/// place one level at a time. Refinement fills midpoints from the bridge law
/// Normal((left+right)/2, h/4) and never touches existing values, so every
/// coarser grid stays embedded bit-for-bit in every finer one. That embedding
/// is the coupling all level differences are built on.
class BrownianGrid {
 public:
  BrownianGrid(RandomStream& stream, double horizon) : horizon_(horizon) {
    if (!(horizon > 0.0)) {
      throw std::invalid_argument("BrownianGrid: horizon must be positive");
    }
    values_ = {0.0, std::sqrt(horizon) * stream.next_gaussian()};
  }

  /// Level n -> n+1; draws 2^n midpoints left to right.
  void refine(RandomStream& stream) {
    const std::size_t cells = values_.size() - 1;
    const double h = horizon_ / static_cast<double>(cells);
    const double sd = std::sqrt(0.25 * h);
    std::vector<double> fine(2 * cells + 1);
    for (std::size_t k = 0; k < cells; ++k) {
      fine[2 * k] = values_[k];
      fine[2 * k + 1] =
          0.5 * (values_[k] + values_[k + 1]) + sd * stream.next_gaussian();
    }
    fine.back() = values_.back();
    values_ = std::move(fine);
    ++level_;
  }

  int level() const { return level_; }
  double horizon() const { return horizon_; }
  std::size_t cells() const { return values_.size() - 1; }
  double step_size() const { return horizon_ / static_cast<double>(cells()); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
  double horizon_;
  int level_ = 0;
};

}  // namespace umc
