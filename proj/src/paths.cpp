#include "tautband/paths.hpp"

#include <cmath>
#include <string>

#include "tautband/errors.hpp"

namespace tautband {

TimeGrid::TimeGrid(std::vector<double> times) {
  if (times.size() < 2) {
    throw InputError("time grid needs at least 2 knots, got " + std::to_string(times.size()));
  }
  if (times.front() != 0.0) {
    throw InputError("time grid must start at 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw InputError("time grid not strictly increasing at knot " + std::to_string(i));
    }
  }
  times_ = std::make_shared<const std::vector<double>>(std::move(times));
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InputError("grid horizon must be positive");
  }
  if (steps < 1) {
    throw InputError("grid needs at least one step");
  }
  const double dt = horizon / static_cast<double>(steps);
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) {
    t[i] = static_cast<double>(i) * dt;
  }
  t[steps] = horizon;
  return TimeGrid(std::move(t));
}

bool TimeGrid::is_uniform(double rel_tol) const noexcept {
  const double mean = horizon() / static_cast<double>(steps());
  for (std::size_t i = 1; i < size(); ++i) {
    if (std::abs(step(i) - mean) > rel_tol * mean) return false;
  }
  return true;
}

SampledPath::SampledPath(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InputError("path has " + std::to_string(values_.size()) + " values for " +
                     std::to_string(grid_.size()) + " knots");
  }
}

Seed derive_seed(Seed master, std::uint64_t index) noexcept {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return Seed{splitmix(splitmix(master.value) ^ index)};
}

double energy(const SampledPath& path) {
  const auto& g = path.grid();
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double dv = path[i] - path[i - 1];
    sum += dv * dv / g.step(i);
  }
  return sum;
}

double variation(const SampledPath& path) {
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    sum += std::abs(path[i] - path[i - 1]);
  }
  return sum;
}

double sup_distance(const SampledPath& p, const SampledPath& q) {
  if (!(p.grid() == q.grid())) {
    throw InputError("sup_distance: paths live on different grids");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(p[i] - q[i]));
  }
  return d;
}

SampledPath simulate_wiener(const TimeGrid& grid, Seed seed) {
  Rng rng(seed.value);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(grid.size());
  w[0] = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    w[i] = w[i - 1] + std::sqrt(grid.step(i)) * normal(rng);
  }
  return SampledPath(grid, std::move(w));
}

SampledPath scale_path(const SampledPath& path, double time_factor, double value_factor) {
  if (!(time_factor > 0.0)) {
    throw InputError("time scaling factor must be positive");
  }
  const auto src = path.grid().times();
  std::vector<double> t(src.size());
  std::vector<double> v(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    t[i] = src[i] * time_factor;
    v[i] = path[i] * value_factor;
  }
  return SampledPath(TimeGrid(std::move(t)), std::move(v));
}

SampledPath rescale_to_unit(const SampledPath& path, double horizon) {
  if (!(horizon > 0.0)) {
    throw InputError("rescale_to_unit: horizon must be positive");
  }
  if (std::abs(path.grid().horizon() - horizon) > 1e-12 * horizon) {
    throw InputError("rescale_to_unit: path does not span [0, horizon]");
  }
  return scale_path(path, 1.0 / horizon, 1.0 / std::sqrt(horizon));
}

}  // namespace tautband
