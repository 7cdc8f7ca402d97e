#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace umc {

/// splitmix64 finalizer; bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic 64-bit child seed for nested experiment structure
/// (per-run seeds inside a meta-experiment, etc.).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

namespace detail {

// Philox-style 2x64 counter block cipher, 10 rounds. Returns the first
// output word; (counter, stream) index the draw, key selects the sequence.
inline std::uint64_t philox2x64(std::uint64_t counter, std::uint64_t stream,
                                std::uint64_t key) {
  constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
  constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  std::uint64_t c0 = counter;
  std::uint64_t c1 = stream;
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * c0;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kWeyl;
  }
  return c0;
}

// Rational approximation for the inverse normal CDF (Acklam), p in (0, 0.5].
inline double inverse_normal_guess(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Inverse standard normal CDF for p in (0, 1); accurate to ~1 ulp via a
/// Halley correction of the rational initial guess.
inline double inverse_normal_cdf(double p) {
  const bool upper = p > 0.5;
  const double pl = upper ? 1.0 - p : p;  // exact for p >= 0.5
  double x = detail::inverse_normal_guess(pl);
  const double err = normal_cdf(x) - pl;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

/// Counter-based Gaussian stream. A stream is addressed by
/// (master_seed, substream_id); draw i is a pure function of
/// (master_seed, substream_id, i), so streams can be replayed, split across
/// workers, and never share state. Gaussian draws are counted one-for-one:
/// the counter is the simulation's work ledger.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t substream_id)
      : key_(mix64(master_seed)), substream_(substream_id) {}

  /// Uniform draw strictly inside (0, 1). Not counted as Gaussian work.
  double next_uniform() {
    const std::uint64_t bits = detail::philox2x64(index_++, substream_, key_);
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  /// One standard normal variate; advances the draw counter by exactly 1.
  double next_gaussian() {
    ++gaussians_;
    return inverse_normal_cdf(next_uniform());
  }

  std::uint64_t gaussian_count() const { return gaussians_; }
  std::uint64_t substream_id() const { return substream_; }

 private:
  std::uint64_t key_;
  std::uint64_t substream_;
  std::uint64_t index_ = 0;
  std::uint64_t gaussians_ = 0;
};

}  // namespace umc
