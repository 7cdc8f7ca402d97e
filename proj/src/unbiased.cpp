#include <umc/unbiased.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <umc/parallel.hpp>

namespace umc {

double LevelDistribution::tail_prob(int i) const {
  if (i < 1) {
    throw std::invalid_argument("tail_prob: level index must be >= 1");
  }
  return std::exp2(-gamma * static_cast<double>(i - 1));
}

int LevelDistribution::sample_level_count(RandomStream& stream) const {
  // Inverse transform: N >= i iff U <= P(N >= i) = 2^(-gamma (i-1)).
  const double u = stream.next_uniform();
  const double step = -gamma * std::numbers::ln2;
  return 1 + static_cast<int>(std::floor(std::log(u) / step));
}

double LevelDistribution::expected_work() const {
  // sum_{i>=0} t_i P(N >= i) = 1 + 1 / (1 - 2^(1-gamma)); geometric in
  // 2^(1-gamma), convergent only for gamma > 1.
  if (!(gamma > 1.0)) {
    throw std::domain_error(
        "expected_work: divergent for gamma <= 1 (infinite expected work)");
  }
  return 1.0 + 1.0 / (1.0 - std::exp2(1.0 - gamma));
}

GammaCheck validate_gamma(double gamma, double strong_order) {
  GammaCheck check{true, gamma, strong_order, ""};
  std::ostringstream msg;
  if (!(gamma > 1.0)) {
    msg << "gamma = " << gamma << " <= 1: expected work per replication diverges";
    check.ok = false;
  } else if (!(gamma < 2.0 * strong_order)) {
    msg << "gamma = " << gamma << " >= 2r = " << 2.0 * strong_order
        << ": estimator variance diverges";
    check.ok = false;
  }
  check.violation = msg.str();
  return check;
}

double default_gamma(double strong_order) { return 0.5 * (1.0 + 2.0 * strong_order); }

double nominal_strong_order(SchemeKind scheme) {
  return scheme == SchemeKind::milstein ? 1.0 : 0.5;
}

ZSample sample_Z(const SdeModel& model, SchemeKind scheme,
                 const PathFunctional& functional, const LevelDistribution& dist,
                 RandomStream& stream) {
  ZSample z;
  z.level_count = dist.sample_level_count(stream);
  const LevelTerminals k =
      simulate_level_terminals(stream, model, scheme, functional, z.level_count);
  z.work = k.gaussian_draws;
  z.deltas.resize(static_cast<std::size_t>(z.level_count));
  z.value = k.values[0];
  for (int n = 1; n <= z.level_count; ++n) {
    const double delta = k.values[n] - k.values[n - 1];
    z.deltas[static_cast<std::size_t>(n - 1)] = delta;
    z.value += delta / dist.tail_prob(n);
  }
  return z;
}

StrongOrderFit estimate_strong_order(const SdeModel& model, SchemeKind scheme,
                                     const PathFunctional& functional,
                                     int first_level, int last_level,
                                     std::uint64_t replications,
                                     std::uint64_t seed, int workers) {
  if (first_level < 1 || last_level < first_level + 3) {
    throw std::invalid_argument("estimate_strong_order: need a span of >= 4 levels");
  }
  if (replications < 1000) {
    throw std::invalid_argument("estimate_strong_order: need >= 1000 replications");
  }
  const int levels = last_level - first_level + 1;

  std::vector<std::vector<double>> sq(replications);
  indexed_map(0, replications, workers,
              [&](std::uint64_t i) {
                RandomStream stream(seed, i);
                const LevelTerminals k = simulate_level_terminals(
                    stream, model, scheme, functional, last_level);
                std::vector<double> row(static_cast<std::size_t>(levels));
                for (int n = first_level; n <= last_level; ++n) {
                  const double d = k.values[n] - k.values[n - 1];
                  row[static_cast<std::size_t>(n - first_level)] = d * d;
                }
                return row;
              },
              sq.data());

  StrongOrderFit fit;
  fit.first_level = first_level;
  fit.last_level = last_level;
  fit.mean_sq_delta.assign(static_cast<std::size_t>(levels), 0.0);
  for (std::uint64_t i = 0; i < replications; ++i) {
    for (int j = 0; j < levels; ++j) {
      fit.mean_sq_delta[static_cast<std::size_t>(j)] += sq[i][static_cast<std::size_t>(j)];
    }
  }
  for (double& m : fit.mean_sq_delta) m /= static_cast<double>(replications);

  bool degenerate = false;
  for (double m : fit.mean_sq_delta) degenerate |= !(m > 0.0);
  if (degenerate) {
    fit.estimable = false;
    fit.r_hat = fit.slope = fit.intercept = 0.0;
    return fit;
  }

  // least squares of log2(mean delta^2) on the level index
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = 0; j < levels; ++j) {
    const double x = static_cast<double>(first_level + j);
    const double y = std::log2(fit.mean_sq_delta[static_cast<std::size_t>(j)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(levels);
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_hat = -0.5 * fit.slope;
  fit.estimable = true;
  return fit;
}

}  // namespace umc
