#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <umc/harness.hpp>
#include <umc/model.hpp>

namespace umc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EstimatorKind { unbiased, mlmc };

struct FunctionalSpec {
  PathFunctional::Kind kind = PathFunctional::Kind::terminal;
  double strike = 1.0;
  double rate = 0.05;

  PathFunctional build() const {
    return kind == PathFunctional::Kind::terminal
               ? PathFunctional::terminal()
               : PathFunctional::discounted_call(strike, rate, 1.0);
  }
};

struct ExperimentConfig {
  std::string model = "cir";  // gbm | cir
  SchemeKind scheme = SchemeKind::milstein;
  FunctionalSpec functional;
  double gamma = 1.5;
  std::vector<double> ire_list = {25, 10, 5, 2, 1, 0.5};
  int meta_reps = 100;
  std::uint64_t n_min = 100;
  std::uint64_t master_seed = 12345;
  EstimatorKind estimator = EstimatorKind::unbiased;
  std::string output;  // may be overridden on the command line

  SdeModel build_model() const;

  /// Canonical JSON rendering (sorted keys, all fields explicit).
  std::string to_json() const;

  /// FNV-1a over the canonical rendering.
  std::string hash() const;
};

/// Parses and validates a JSON config document. Unknown keys, bad enum
/// values, and out-of-range numbers raise ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);

/// One reproduced table with run metadata, as a CSV file with a
/// comment-prefixed header block.
void emit_csv(const std::vector<TableRow>& rows, const ExperimentConfig& config,
              const std::string& path);

/// Renders the same bytes emit_csv writes.
std::string render_csv(const std::vector<TableRow>& rows, const ExperimentConfig& config);

}  // namespace umc
