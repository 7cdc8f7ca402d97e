#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <umc/mlmc.hpp>
#include <umc/model.hpp>
#include <umc/stats.hpp>
#include <umc/unbiased.hpp>

namespace umc {

struct StoppingRule {
  double epsilon = 0.0;
  std::uint64_t n_min = 100;  // the RMSE test is undefined below 2 and noisy for tiny n
};

struct Replication {
  double value;
  std::uint64_t work;
};

/// One i.i.d. replication; index i must map to substream i of the run's seed.
using ReplicationSampler = std::function<Replication(std::uint64_t index)>;

struct RunResult {
  double estimate;
  std::uint64_t replications;  // N(eps)
  std::uint64_t total_work;
};

/// Draws replications in index order until the first n >= n_min with sample
/// RMSE of the mean <= epsilon; returns the sample mean at the stop.
RunResult run_until_tolerance_serial(const ReplicationSampler& sampler,
                                     const StoppingRule& rule);

/// Batched parallel version of the same rule. Replications are mapped in
/// parallel, then scanned in index order; results past the stopping index are
/// discarded, so the output is byte-identical to the serial reference for any
/// worker count.
RunResult run_until_tolerance(const ReplicationSampler& sampler,
                              const StoppingRule& rule, int workers);

struct TableRow {
  double ire_pct;
  double estimate;
  double ci_halfwidth;  // 1.645 * sd / sqrt(meta_reps)
  double rmse;          // against the known true value
  double work_mean;
  double work_ci_halfwidth;
};

/// Closed-form E k(X) where available: CIR terminal mean, GBM terminal mean,
/// GBM discounted call (Black-Scholes); nullopt otherwise.
std::optional<double> true_value(const SdeModel& model, const PathFunctional& functional);

/// One full estimator run at target RMSE epsilon, seeded for run `run_seed`;
/// returns (estimate, Gaussian draws).
using EstimatorRun =
    std::function<std::pair<double, std::uint64_t>(std::uint64_t run_seed, double epsilon)>;

/// The table protocol: per intended relative error k%, set eps = (k/100)|alpha|,
/// perform meta_reps independent runs on disjoint seed blocks, and report the
/// mean estimate, 90% CI half-widths, realized RMSE, and mean work. Runs are
/// executed in parallel and reduced in run order.
std::vector<TableRow> meta_experiment(const EstimatorRun& run, double alpha,
                                      std::span<const double> ire_pct, int meta_reps,
                                      std::uint64_t master_seed, int workers);

/// Replication source for the unbiased estimator (one substream per Z).
ReplicationSampler make_z_sampler(const SdeModel& model, SchemeKind scheme,
                                  const PathFunctional& functional,
                                  const LevelDistribution& dist, std::uint64_t run_seed);

/// EstimatorRun adapters for the two estimators under comparison.
EstimatorRun make_unbiased_run(const SdeModel& model, SchemeKind scheme,
                               const PathFunctional& functional,
                               const LevelDistribution& dist, std::uint64_t n_min);
EstimatorRun make_mlmc_run(const SdeModel& model, SchemeKind scheme,
                           const PathFunctional& functional,
                           std::uint64_t initial_samples = 1000, int max_level = 25);

}  // namespace umc
