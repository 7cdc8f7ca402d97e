#include <umc/harness.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <umc/parallel.hpp>

namespace umc {

namespace {

constexpr double kNormal90 = 1.6448536269514722;  // 95th percentile, two-sided 90% CI

bool stop_satisfied(const RunningStats& stats, const StoppingRule& rule) {
  return stats.count() >= rule.n_min && stats.count() >= 2 &&
         stats.sample_rmse_of_mean() <= rule.epsilon;
}

void check_rule(const StoppingRule& rule) {
  if (!(rule.epsilon > 0.0)) {
    throw std::invalid_argument("run_until_tolerance: epsilon must be positive");
  }
  if (rule.n_min < 2) {
    throw std::invalid_argument("run_until_tolerance: n_min must be at least 2");
  }
}

}  // namespace

RunResult run_until_tolerance_serial(const ReplicationSampler& sampler,
                                     const StoppingRule& rule) {
  check_rule(rule);
  RunningStats stats;
  for (std::uint64_t i = 0;; ++i) {
    const Replication r = sampler(i);
    stats.push(r.value, r.work);
    if (stop_satisfied(stats, rule)) {
      return {stats.mean(), stats.count(), stats.work_total()};
    }
  }
}

RunResult run_until_tolerance(const ReplicationSampler& sampler,
                              const StoppingRule& rule, int workers) {
  check_rule(rule);
  RunningStats stats;
  std::uint64_t next = 0;
  std::uint64_t batch = rule.n_min;
  std::vector<Replication> buffer;
  for (;;) {
    buffer.resize(batch);
    indexed_map(next, batch, workers, sampler, buffer.data());
    // Stopping is decided on the index-ordered prefix; anything past the
    // stopping index is discarded.
    for (const Replication& r : buffer) {
      stats.push(r.value, r.work);
      if (stop_satisfied(stats, rule)) {
        return {stats.mean(), stats.count(), stats.work_total()};
      }
    }
    next += batch;
    batch = std::min<std::uint64_t>(std::max<std::uint64_t>(64, stats.count() / 4), 1 << 16);
  }
}

std::optional<double> true_value(const SdeModel& model, const PathFunctional& functional) {
  if (model.name == "cir" && functional.kind() == PathFunctional::Kind::terminal) {
    const double kappa = model.params.at("kappa");
    const double theta = model.params.at("theta");
    return theta + (model.x0 - theta) * std::exp(-kappa);
  }
  if (model.name == "gbm") {
    const double rate = model.params.at("rate");
    const double sigma = model.params.at("sigma");
    if (functional.kind() == PathFunctional::Kind::terminal) {
      return model.x0 * std::exp(rate);
    }
    // discounted call on the lognormal terminal state over [0, T]
    const double T = functional.horizon();
    const double K = functional.strike();
    const double s0 = model.x0;
    const double vol = sigma * std::sqrt(T);
    const double d1 = (std::log(s0 / K) + (rate + 0.5 * sigma * sigma) * T) / vol;
    const double d2 = d1 - vol;
    const double forward = s0 * std::exp(rate * T);
    return std::exp(-functional.rate() * T) *
           (forward * normal_cdf(d1) - K * normal_cdf(d2));
  }
  return std::nullopt;
}

std::vector<TableRow> meta_experiment(const EstimatorRun& run, double alpha,
                                      std::span<const double> ire_pct, int meta_reps,
                                      std::uint64_t master_seed, int workers) {
  if (ire_pct.empty() || meta_reps < 2) {
    throw std::invalid_argument("meta_experiment: need IRE values and >= 2 meta repetitions");
  }
  for (double k : ire_pct) {
    if (!(k > 0.0 && k <= 100.0)) {
      throw std::invalid_argument("meta_experiment: IRE percentages must lie in (0, 100]");
    }
  }
  std::vector<TableRow> rows;
  rows.reserve(ire_pct.size());
  const std::uint64_t reps = static_cast<std::uint64_t>(meta_reps);
  std::vector<std::pair<double, std::uint64_t>> results(reps);
  for (std::size_t ire_index = 0; ire_index < ire_pct.size(); ++ire_index) {
    const double eps = ire_pct[ire_index] / 100.0 * std::abs(alpha);
    const std::uint64_t block = ire_index * reps;
    indexed_map(0, reps, workers,
                [&](std::uint64_t m) {
                  return run(derive_seed(master_seed, block + m), eps);
                },
                results.data());
    RunningStats est_stats, work_stats;
    double sq_err = 0.0;
    for (const auto& [estimate, work] : results) {
      est_stats.push(estimate);
      work_stats.push(static_cast<double>(work));
      sq_err += (estimate - alpha) * (estimate - alpha);
    }
    TableRow row;
    row.ire_pct = ire_pct[ire_index];
    row.estimate = est_stats.mean();
    row.ci_halfwidth = kNormal90 * est_stats.sample_stddev() / std::sqrt(static_cast<double>(reps));
    row.rmse = std::sqrt(sq_err / static_cast<double>(reps));
    row.work_mean = work_stats.mean();
    row.work_ci_halfwidth =
        kNormal90 * work_stats.sample_stddev() / std::sqrt(static_cast<double>(reps));
    rows.push_back(row);
  }
  return rows;
}

ReplicationSampler make_z_sampler(const SdeModel& model, SchemeKind scheme,
                                  const PathFunctional& functional,
                                  const LevelDistribution& dist, std::uint64_t run_seed) {
  return [=](std::uint64_t index) {
    RandomStream stream(run_seed, index);
    const ZSample z = sample_Z(model, scheme, functional, dist, stream);
    return Replication{z.value, z.work};
  };
}

EstimatorRun make_unbiased_run(const SdeModel& model, SchemeKind scheme,
                               const PathFunctional& functional,
                               const LevelDistribution& dist, std::uint64_t n_min) {
  return [=](std::uint64_t run_seed, double epsilon) {
    const ReplicationSampler sampler =
        make_z_sampler(model, scheme, functional, dist, run_seed);
    // Meta runs are already parallel across run seeds; each run is the
    // serial reference.
    const RunResult r = run_until_tolerance_serial(sampler, {epsilon, n_min});
    return std::make_pair(r.estimate, r.total_work);
  };
}

EstimatorRun make_mlmc_run(const SdeModel& model, SchemeKind scheme,
                           const PathFunctional& functional,
                           std::uint64_t initial_samples, int max_level) {
  return [=](std::uint64_t run_seed, double epsilon) {
    MlmcConfig config;
    config.epsilon = epsilon;
    config.initial_samples = initial_samples;
    config.max_level = max_level;
    const MlmcResult r = mlmc_estimate(model, scheme, functional, config, run_seed, 1);
    return std::make_pair(r.estimate, r.total_work);
  };
}

}  // namespace umc
