#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <umc/model.hpp>
#include <umc/rng.hpp>

namespace umc {

struct MlmcConfig {
  double epsilon = 0.0;                  // target RMSE
  std::uint64_t initial_samples = 1000;  // per newly opened level
  int max_level = 25;
  int start_level = 2;  // adaptation starts with levels 0..start_level
};

struct MlmcResult {
  double estimate;
  std::uint64_t total_work;  // Gaussian draws, from the stream ledgers
  std::vector<std::uint64_t> samples_per_level;
  std::vector<double> mean_per_level;
  std::vector<double> variance_per_level;
};

/// Y_0 = k at level 0; Y_l = k(X_{2^-l}) - k(X_{2^-(l-1)}) for l >= 1, both
/// terminals from one shared refined path. Consumes exactly 2^l draws and is
/// the same level difference the unbiased estimator telescopes over.
double coupled_level_sample(int level, const SdeModel& model, SchemeKind scheme,
                            const PathFunctional& functional, RandomStream& stream);

/// N_l = ceil( 2 eps^-2 sqrt(V_l h_l) sum_k sqrt(V_k / h_k) ), floored at one
/// sample per level; targets statistical variance eps^2 / 2.
std::vector<std::uint64_t> optimal_level_sizes(std::span<const double> variances,
                                               std::span<const double> step_sizes,
                                               double epsilon);

/// Giles-style adaptive multilevel estimator with refinement factor 2:
/// estimate variances, size levels, extend, and grow the level set until the
/// remaining-bias test max(|Y_{L-1}|/2, |Y_L|) < eps / sqrt(2) passes.
/// Throws if the level cap is exceeded.
MlmcResult mlmc_estimate(const SdeModel& model, SchemeKind scheme,
                         const PathFunctional& functional, const MlmcConfig& config,
                         std::uint64_t seed, int workers);

}  // namespace umc
