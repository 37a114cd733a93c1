#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace tautband {

/// Strictly increasing time knots starting at 0.
///
/// The knot storage is shared between copies and never mutated, so paths
/// sampled on the same grid can be copied and handed to other threads freely.
class TimeGrid {
 public:
  /// Throws InputError unless times[0] == 0, size >= 2 and every step is positive.
  explicit TimeGrid(std::vector<double> times);

  /// N + 1 equally spaced knots i * (horizon / N) on [0, horizon].
  static TimeGrid uniform(double horizon, std::size_t steps);

  std::size_t size() const noexcept { return times_->size(); }
  std::size_t steps() const noexcept { return size() - 1; }
  double operator[](std::size_t i) const noexcept { return (*times_)[i]; }
  std::span<const double> times() const noexcept { return *times_; }
  double horizon() const noexcept { return times_->back(); }

  /// t[i] - t[i-1] for i >= 1.
  double step(std::size_t i) const noexcept { return (*times_)[i] - (*times_)[i - 1]; }

  /// True when every step matches the mean step to the given relative tolerance.
  bool is_uniform(double rel_tol = 1e-9) const noexcept;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
    return a.times_ == b.times_ || *a.times_ == *b.times_;
  }

 private:
  std::shared_ptr<const std::vector<double>> times_;
};

/// Values at the knots of a grid; read as the piecewise-linear interpolant.
class SampledPath {
 public:
  SampledPath(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// Engine behind every random draw in the library. Gaussian variates come from
/// std::normal_distribution<double> on top of it, so streams are reproducible
/// per seed within one standard library build.
using Rng = std::mt19937_64;

/// Per-item seed from (master, index) through two SplitMix64 rounds.
Seed derive_seed(Seed master, std::uint64_t index) noexcept;

/// Squared Sobolev seminorm of the interpolant: sum of (dv)^2 / dt.
double energy(const SampledPath& path);

/// Total variation: sum of |dv|.
double variation(const SampledPath& path);

/// Knot-wise uniform distance. Throws InputError when the grids differ.
double sup_distance(const SampledPath& p, const SampledPath& q);

/// Standard Wiener process sampled at the grid knots, W(0) = 0.
SampledPath simulate_wiener(const TimeGrid& grid, Seed seed);

/// Brownian scaling t -> t / horizon, v -> v / sqrt(horizon). Energy is preserved.
SampledPath rescale_to_unit(const SampledPath& path, double horizon);

/// General scaling map t -> time_factor * t, v -> value_factor * v.
SampledPath scale_path(const SampledPath& path, double time_factor, double value_factor);

}  // namespace tautband
