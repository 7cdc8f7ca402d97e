#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <umc/brownian.hpp>
#include <umc/rng.hpp>

namespace umc {

enum class SchemeKind { euler, milstein };

const char* to_string(SchemeKind scheme);

/// Scalar SDE dX = mu(X) dt + sigma(X) dB with X(0) = x0.
/// milstein_coeff is 0.5 * sigma * sigma' as a single callable so models with
/// a boundary (CIR) can pin it to the closed form valid on the whole line.
struct SdeModel {
  std::string name;
  double x0 = 0.0;
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  std::function<double(double)> diffusion_derivative;
  std::function<double(double)> milstein_coeff;
  std::map<std::string, double> params;

  /// dX = 0.05 X dt + 0.2 X dB, X(0) = 1.
  static SdeModel gbm();

  /// dX = 5(0.04 - X) dt + 0.25 sqrt(max(X,0)) dB, X(0) = 0.04.
  /// The state is not clamped; the square root truncates at 0 and the
  /// Milstein coefficient is the constant sigma^2/4 = 0.015625 for all x.
  static SdeModel cir();
};

/// Functional applied to the terminal state X(T).
class PathFunctional {
 public:
  enum class Kind { terminal, discounted_call };

  static PathFunctional terminal() { return PathFunctional(Kind::terminal, 0, 0, 0); }
  static PathFunctional discounted_call(double strike, double rate, double horizon) {
    return PathFunctional(Kind::discounted_call, strike, rate, horizon);
  }

  double operator()(double terminal_state) const {
    if (kind_ == Kind::terminal) return terminal_state;
    return std::exp(-rate_ * horizon_) * std::max(terminal_state - strike_, 0.0);
  }

  Kind kind() const { return kind_; }
  double strike() const { return strike_; }
  double rate() const { return rate_; }
  double horizon() const { return horizon_; }

 private:
  PathFunctional(Kind kind, double strike, double rate, double horizon)
      : kind_(kind), strike_(strike), rate_(rate), horizon_(horizon) {}

  Kind kind_;
  double strike_;
  double rate_;
  double horizon_;
};

/// x + mu(x) h + sigma(x) dB.
double euler_step(double x, double h, double db, const SdeModel& model);

/// Euler plus the first-order correction 0.5 sigma sigma' (dB^2 - h).
double milstein_step(double x, double h, double db, const SdeModel& model);

/// Steps through every increment of the grid; consumes no randomness.
double simulate_terminal(const BrownianGrid& grid, const SdeModel& model,
                         SchemeKind scheme);

struct LevelTerminals {
  std::vector<double> values;    // k(X_{2^-n}) for n = 0..max_level
  std::uint64_t gaussian_draws;  // = 2^max_level
};

/// Terminal functional values at every level 0..max_level, all driven by one
/// Brownian path built by successive refinement on the given stream.
LevelTerminals simulate_level_terminals(RandomStream& stream, const SdeModel& model,
                                        SchemeKind scheme,
                                        const PathFunctional& functional,
                                        int max_level);

}  // namespace umc
