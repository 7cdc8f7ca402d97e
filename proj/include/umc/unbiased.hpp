#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <umc/model.hpp>
#include <umc/rng.hpp>

namespace umc {

/// Randomization law of the level count N >= 1:
///   P(N >= i) = 2^(-gamma (i-1)),
/// together with the per-level work model t_0 = 1, t_i = 2^(i-1) Gaussian
/// draws. Finite expected work needs gamma > 1; finite estimator variance
/// needs gamma < 2r for a scheme of strong order r.
struct LevelDistribution {
  double gamma = 1.5;

  double tail_prob(int i) const;                    // P(N >= i), i >= 1
  int sample_level_count(RandomStream& stream) const;
  double expected_work() const;                      // throws if gamma <= 1

  static std::uint64_t work_per_level(int i) {       // t_i
    return i == 0 ? 1 : std::uint64_t{1} << (i - 1);
  }
};

struct GammaCheck {
  bool ok;
  double gamma;
  double strong_order;
  std::string violation;  // empty when ok
};

/// Valid window is 1 < gamma < 2r.
GammaCheck validate_gamma(double gamma, double strong_order);

/// Midpoint of the valid window, (1 + 2r) / 2.
double default_gamma(double strong_order);

/// Nominal strong order of the scheme on the shipped models
/// (euler 0.5, milstein 1.0).
double nominal_strong_order(SchemeKind scheme);

/// One replication of the unbiased estimator
///   Z = k(X_1) + sum_{n=1..N} (k(X_{2^-n}) - k(X_{2^-(n-1)})) / P(N >= n).
struct ZSample {
  double value;
  int level_count;             // N
  std::vector<double> deltas;  // deltas[n-1] = k_n - k_{n-1}, n = 1..N
  std::uint64_t work;          // Gaussian draws consumed, = 2^N
};

ZSample sample_Z(const SdeModel& model, SchemeKind scheme,
                 const PathFunctional& functional, const LevelDistribution& dist,
                 RandomStream& stream);

/// Empirical strong-order fit: per-level mean squared consecutive difference
/// regressed as log2 E delta_n^2 ~ intercept + slope * n; r_hat = -slope / 2.
struct StrongOrderFit {
  bool estimable;
  double r_hat;
  double slope;
  double intercept;
  int first_level;
  int last_level;
  std::vector<double> mean_sq_delta;  // one entry per level in the range
};

StrongOrderFit estimate_strong_order(const SdeModel& model, SchemeKind scheme,
                                     const PathFunctional& functional,
                                     int first_level, int last_level,
                                     std::uint64_t replications,
                                     std::uint64_t seed, int workers);

}  // namespace umc
