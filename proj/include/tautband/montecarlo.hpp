#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tautband/paths.hpp"
#include "tautband/stats.hpp"

namespace tautband {

enum class Mode { taut_free, taut_fixed, pursuit };

std::string to_string(Mode mode);
/// Accepts "taut-free", "taut-fixed", "pursuit" (underscores also accepted).
Mode parse_mode(const std::string& name);

struct ExperimentConfig {
  double horizon = 1000.0;
  std::size_t steps = 100'000;
  double radius = 1.0;
  std::size_t paths = 300;
  Seed master_seed{};
  Mode mode = Mode::taut_fixed;
  std::size_t bins = 50;
  /// Projection half-width of the pursuit scheme.
  double clamp = 0.99;

  /// horizon T with round(T * steps_per_unit) steps.
  static ExperimentConfig with_steps_per_unit(double horizon, double steps_per_unit);

  void validate() const;
};

/// How to run, as opposed to what to compute: results never depend on it.
struct Execution {
  std::size_t threads = 1;  ///< 0 = hardware concurrency
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Sample statistics of the per-path values. In taut modes the values are
/// (r / sqrt T) * sqrt(energy); in pursuit mode sqrt(energy / T). The raw_*
/// fields describe sqrt(energy) itself (the discrete I or I0).
struct EnergyStats {
  std::size_t count = 0;
  double sample_mean = 0.0;
  double sample_median = 0.0;
  double sample_variance = 0.0;  ///< plug-in, divisor M
  double second_moment = 0.0;
  double mean_standard_error = 0.0;
  bool normalized = true;
  Histogram histogram;
  double raw_mean = 0.0;
  double raw_variance = 0.0;
  double raw_second_moment = 0.0;
  /// Standard error of raw_variance, sqrt((m4 - m2^2) / M).
  double raw_variance_standard_error = 0.0;
  double raw_second_moment_standard_error = 0.0;
};

/// Summarizes values in index order. `raw` must have the same length.
EnergyStats summarize(const std::vector<double>& values, const std::vector<double>& raw, Histogram histogram,
                      bool normalized);

struct ExperimentResult {
  EnergyStats stats;
  std::vector<double> per_path;      ///< normalized value per path, in seed-index order
  std::vector<double> raw_per_path;  ///< sqrt(energy) per path
  Histogram occupancy;               ///< pursuit mode: X = h - W over all paths
  std::size_t clamp_hits = 0;        ///< pursuit mode
};

/// Path i uses derive_seed(master_seed, i) on the uniform grid of `steps` steps.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Execution& exec = {});

struct SweepPoint {
  double horizon;
  EnergyStats stats;
};

/// run_experiment for each horizon with steps = round(T * steps_per_unit).
/// Paths share seeds across horizons, so shorter runs see prefixes of the
/// same Wiener paths.
std::vector<SweepPoint> convergence_sweep(const ExperimentConfig& base, const std::vector<double>& horizons,
                                          double steps_per_unit, const Execution& exec = {});

struct ScalingReport {
  std::size_t paths = 0;
  /// max over paths of |I(W on [0,T], r) - I(W rescaled to [0,1], r/sqrt T)| / I
  double max_rel_dev_unit = 0.0;
  /// same for times * lambda^2, values and radius * lambda
  double max_rel_dev_lambda = 0.0;
};

ScalingReport scaling_check(const ExperimentConfig& cfg, double lambda, const Execution& exec = {});

struct FreeKnotPoint {
  double eps;
  double mean;            ///< mean of eps * sqrt(energy(g))
  double standard_error;
  double knots_scaled;    ///< mean of N_eps * eps^2, N_eps = crossings + 1
  double max_sup_excess;  ///< max over paths of sup|g - W| - eps (<= one-step increment)
  bool coarse_grid;       ///< fewer than 100 steps per expected crossing time eps^2 / 4
};

/// Paired experiment: every eps sees the same paths on [0, 1] with `steps` steps.
std::vector<FreeKnotPoint> free_knot_estimate(const std::vector<double>& eps_list, std::size_t paths,
                                              std::size_t steps, Seed master_seed, const Execution& exec = {});

}  // namespace tautband
