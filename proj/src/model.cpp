#include <umc/model.hpp>

#include <cmath>
#include <stdexcept>

namespace umc {

const char* to_string(SchemeKind scheme) {
  return scheme == SchemeKind::euler ? "euler" : "milstein";
}

SdeModel SdeModel::gbm() {
  SdeModel m;
  m.name = "gbm";
  m.x0 = 1.0;
  m.drift = [](double x) { return 0.05 * x; };
  m.diffusion = [](double x) { return 0.2 * x; };
  m.diffusion_derivative = [](double) { return 0.2; };
  m.milstein_coeff = [](double x) { return 0.02 * x; };
  m.params = {{"rate", 0.05}, {"sigma", 0.2}};
  return m;
}

SdeModel SdeModel::cir() {
  SdeModel m;
  m.name = "cir";
  m.x0 = 0.04;
  m.drift = [](double x) { return 5.0 * (0.04 - x); };
  m.diffusion = [](double x) { return 0.25 * std::sqrt(std::max(x, 0.0)); };
  m.diffusion_derivative = [](double x) {
    return x > 0.0 ? 0.25 / (2.0 * std::sqrt(x)) : 0.0;
  };
  m.milstein_coeff = [](double) { return 0.015625; };
  m.params = {{"kappa", 5.0}, {"theta", 0.04}, {"sigma", 0.25}};
  return m;
}

double euler_step(double x, double h, double db, const SdeModel& model) {
  return x + model.drift(x) * h + model.diffusion(x) * db;
}

double milstein_step(double x, double h, double db, const SdeModel& model) {
  return x + model.drift(x) * h + model.diffusion(x) * db +
         model.milstein_coeff(x) * (db * db - h);
}

double simulate_terminal(const BrownianGrid& grid, const SdeModel& model,
                         SchemeKind scheme) {
  const std::span<const double> b = grid.values();
  const double h = grid.step_size();
  double x = model.x0;
  if (scheme == SchemeKind::euler) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      x = euler_step(x, h, b[j + 1] - b[j], model);
    }
  } else {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      x = milstein_step(x, h, b[j + 1] - b[j], model);
    }
  }
  return x;
}

LevelTerminals simulate_level_terminals(RandomStream& stream, const SdeModel& model,
                                        SchemeKind scheme,
                                        const PathFunctional& functional,
                                        int max_level) {
  if (max_level < 0) {
    throw std::invalid_argument("simulate_level_terminals: max_level must be >= 0");
  }
  const std::uint64_t before = stream.gaussian_count();
  LevelTerminals out;
  out.values.reserve(static_cast<std::size_t>(max_level) + 1);
  BrownianGrid grid(stream, 1.0);
  out.values.push_back(functional(simulate_terminal(grid, model, scheme)));
  for (int n = 1; n <= max_level; ++n) {
    grid.refine(stream);
    out.values.push_back(functional(simulate_terminal(grid, model, scheme)));
  }
  out.gaussian_draws = stream.gaussian_count() - before;
  return out;
}

}  // namespace umc
