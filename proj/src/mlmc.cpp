#include <umc/mlmc.hpp>

#include <cmath>
#include <stdexcept>

#include <umc/parallel.hpp>
#include <umc/stats.hpp>

namespace umc {

double coupled_level_sample(int level, const SdeModel& model, SchemeKind scheme,
                            const PathFunctional& functional, RandomStream& stream) {
  const LevelTerminals k =
      simulate_level_terminals(stream, model, scheme, functional, level);
  if (level == 0) return k.values[0];
  return k.values[static_cast<std::size_t>(level)] -
         k.values[static_cast<std::size_t>(level - 1)];
}

std::vector<std::uint64_t> optimal_level_sizes(std::span<const double> variances,
                                               std::span<const double> step_sizes,
                                               double epsilon) {
  if (variances.size() != step_sizes.size()) {
    throw std::invalid_argument("optimal_level_sizes: mismatched inputs");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("optimal_level_sizes: epsilon must be positive");
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < variances.size(); ++l) {
    sum += std::sqrt(variances[l] / step_sizes[l]);
  }
  std::vector<std::uint64_t> sizes(variances.size());
  for (std::size_t l = 0; l < variances.size(); ++l) {
    const double n =
        std::ceil(2.0 / (epsilon * epsilon) * std::sqrt(variances[l] * step_sizes[l]) * sum);
    sizes[l] = n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
  }
  return sizes;
}

namespace {

// Per-level sample store: parallel map of new samples, merged in index order.
struct LevelState {
  RunningStats stats;
  std::uint64_t next_index = 0;  // substream index within the level block
};

constexpr std::uint64_t kLevelStride = std::uint64_t{1} << 40;

void extend_level(LevelState& state, int level, std::uint64_t target,
                  const SdeModel& model, SchemeKind scheme,
                  const PathFunctional& functional, std::uint64_t seed, int workers,
                  std::uint64_t& work) {
  if (target <= state.stats.count()) return;
  const std::uint64_t add = target - state.stats.count();
  struct Sample {
    double y;
    std::uint64_t draws;
  };
  std::vector<Sample> batch(add);
  const std::uint64_t base =
      static_cast<std::uint64_t>(level) * kLevelStride + state.next_index;
  indexed_map(base, add, workers,
              [&](std::uint64_t sub) {
                RandomStream stream(seed, sub);
                const double y =
                    coupled_level_sample(level, model, scheme, functional, stream);
                return Sample{y, stream.gaussian_count()};
              },
              batch.data());
  for (const Sample& s : batch) {
    state.stats.push(s.y, s.draws);
    work += s.draws;
  }
  state.next_index += add;
}

}  // namespace

MlmcResult mlmc_estimate(const SdeModel& model, SchemeKind scheme,
                         const PathFunctional& functional, const MlmcConfig& config,
                         std::uint64_t seed, int workers) {
  if (!(config.epsilon > 0.0)) {
    throw std::invalid_argument("mlmc_estimate: epsilon must be positive");
  }
  if (config.initial_samples < 2 || config.start_level < 1 ||
      config.start_level > config.max_level) {
    throw std::invalid_argument("mlmc_estimate: invalid sampling configuration");
  }
  int top = config.start_level;
  std::vector<LevelState> levels(static_cast<std::size_t>(top) + 1);
  std::uint64_t work = 0;

  for (int l = 0; l <= top; ++l) {
    extend_level(levels[static_cast<std::size_t>(l)], l, config.initial_samples, model,
                 scheme, functional, seed, workers, work);
  }

  const double bias_bound = config.epsilon / std::sqrt(2.0);
  for (;;) {
    std::vector<double> variances, steps;
    variances.reserve(levels.size());
    steps.reserve(levels.size());
    for (int l = 0; l <= top; ++l) {
      variances.push_back(std::max(levels[static_cast<std::size_t>(l)].stats.sample_variance(), 0.0));
      steps.push_back(std::exp2(static_cast<double>(-l)));
    }
    const std::vector<std::uint64_t> target =
        optimal_level_sizes(variances, steps, config.epsilon);

    bool extended = false;
    for (int l = 0; l <= top; ++l) {
      LevelState& state = levels[static_cast<std::size_t>(l)];
      if (target[static_cast<std::size_t>(l)] > state.stats.count()) {
        extend_level(state, l, target[static_cast<std::size_t>(l)], model, scheme,
                     functional, seed, workers, work);
        extended = true;
      }
    }
    if (extended) continue;

    const double tail_prev =
        std::abs(levels[static_cast<std::size_t>(top - 1)].stats.mean()) / 2.0;
    const double tail_top = std::abs(levels[static_cast<std::size_t>(top)].stats.mean());
    if (std::max(tail_prev, tail_top) < bias_bound) break;

    ++top;
    if (top > config.max_level) {
      throw std::runtime_error("mlmc_estimate: level cap " +
                               std::to_string(config.max_level) +
                               " exceeded before the bias test passed");
    }
    levels.emplace_back();
    extend_level(levels.back(), top, config.initial_samples, model, scheme, functional,
                 seed, workers, work);
  }

  MlmcResult result;
  result.total_work = work;
  result.estimate = 0.0;
  for (const LevelState& state : levels) {
    result.estimate += state.stats.mean();
    result.samples_per_level.push_back(state.stats.count());
    result.mean_per_level.push_back(state.stats.mean());
    result.variance_per_level.push_back(state.stats.sample_variance());
  }
  return result;
}

}  // namespace umc
