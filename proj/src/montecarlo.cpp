#include "tautband/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "tautband/errors.hpp"
#include "tautband/parallel.hpp"
#include "tautband/pursuit.hpp"
#include "tautband/tautstring.hpp"

namespace tautband {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::taut_free:
      return "taut-free";
    case Mode::taut_fixed:
      return "taut-fixed";
    case Mode::pursuit:
      return "pursuit";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "taut-free") return Mode::taut_free;
  if (s == "taut-fixed") return Mode::taut_fixed;
  if (s == "pursuit") return Mode::pursuit;
  throw InputError("unknown mode '" + name + "' (expected taut-fixed, taut-free or pursuit)");
}

ExperimentConfig ExperimentConfig::with_steps_per_unit(double horizon, double steps_per_unit) {
  ExperimentConfig cfg;
  cfg.horizon = horizon;
  const double steps = std::round(horizon * steps_per_unit);
  if (!(steps >= 2.0)) throw InputError("need at least 2 steps; raise --steps-per-unit or --t");
  cfg.steps = static_cast<std::size_t>(steps);
  return cfg;
}

void ExperimentConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon T must be positive");
  if (steps < 2) throw InputError("steps N must be at least 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("radius r must be positive");
  if (paths < 1) throw InputError("paths M must be at least 1");
  if (bins < 1) throw InputError("bins must be at least 1");
  if (!(clamp > 0.0 && clamp < 1.0)) throw InputError("clamp must lie in (0, 1)");
}

namespace {

// Counts finished items and forwards to the user callback.
class ProgressCounter {
 public:
  ProgressCounter(const Execution& exec, std::size_t total) : exec_(exec), total_(total) {}
  void tick() {
    const std::size_t done = ++done_;
    if (exec_.progress) {
      std::lock_guard lock(mutex_);
      exec_.progress(done, total_);
    }
  }

 private:
  const Execution& exec_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex mutex_;
};

}  // namespace

EnergyStats summarize(const std::vector<double>& values, const std::vector<double>& raw, Histogram histogram,
                      bool normalized) {
  if (values.empty() || values.size() != raw.size()) {
    throw InvariantError("summarize: value and raw samples must be non-empty and equally long");
  }
  EnergyStats s;
  s.count = values.size();
  MomentAccumulator acc;
  for (double v : values) {
    acc.add(v);
    histogram.add(v);
  }
  s.sample_mean = acc.mean();
  s.sample_variance = acc.variance();
  s.second_moment = acc.second_moment();
  s.mean_standard_error = acc.standard_error();
  s.sample_median = median(values);
  s.normalized = normalized;
  s.histogram = std::move(histogram);

  MomentAccumulator raw_acc;
  MomentAccumulator raw_sq;
  for (double v : raw) {
    raw_acc.add(v);
    raw_sq.add(v * v);
  }
  s.raw_mean = raw_acc.mean();
  s.raw_variance = raw_acc.variance();
  s.raw_second_moment = raw_acc.second_moment();
  s.raw_second_moment_standard_error = raw_sq.standard_error();
  double m4 = 0.0;
  for (double v : raw) {
    const double d = v - s.raw_mean;
    m4 += d * d * d * d;
  }
  m4 /= static_cast<double>(raw.size());
  s.raw_variance_standard_error =
      std::sqrt(std::max(0.0, m4 - s.raw_variance * s.raw_variance) / static_cast<double>(raw.size()));
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Execution& exec) {
  cfg.validate();
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.steps);
  const double norm = cfg.radius / std::sqrt(cfg.horizon);
  const bool pursuit = cfg.mode == Mode::pursuit;
  const SpeedLaw law = optimal_law(cfg.clamp);

  std::vector<double> values(cfg.paths);
  std::vector<double> raw(cfg.paths);
  std::vector<Histogram> occupancy(pursuit ? cfg.paths : 0);
  std::vector<std::size_t> hits(cfg.paths, 0);
  ProgressCounter progress(exec, cfg.paths);

  parallel_for(cfg.paths, exec.threads, [&](std::size_t i) {
    const SampledPath w = simulate_wiener(grid, derive_seed(cfg.master_seed, i));
    if (pursuit) {
      PursuitRun run = simulate_pursuit(w, law, cfg.bins);
      values[i] = run.sqrt_rate;
      raw[i] = std::sqrt(run.energy_rate * cfg.horizon);
      occupancy[i] = std::move(run.occupancy);
      hits[i] = run.clamp_hits;
    } else {
      const EndMode end = cfg.mode == Mode::taut_fixed ? EndMode::fixed : EndMode::free;
      const double e = taut_energy(w, cfg.radius, end).energy_value;
      raw[i] = std::sqrt(e);
      values[i] = norm * raw[i];
    }
    progress.tick();
  });

  ExperimentResult result;
  result.stats = summarize(values, raw, Histogram(0.0, pursuit ? 3.0 : 2.0, cfg.bins), !pursuit);
  result.per_path = std::move(values);
  result.raw_per_path = std::move(raw);
  if (pursuit) {
    result.occupancy = Histogram(-1.0, 1.0, cfg.bins);
    for (const auto& h : occupancy) result.occupancy.merge(h);
    for (auto h : hits) result.clamp_hits += h;
  }
  return result;
}

std::vector<SweepPoint> convergence_sweep(const ExperimentConfig& base, const std::vector<double>& horizons,
                                          double steps_per_unit, const Execution& exec) {
  for (std::size_t k = 1; k < horizons.size(); ++k) {
    if (!(horizons[k] > horizons[k - 1])) throw InputError("sweep horizons must be increasing");
  }
  std::vector<SweepPoint> out;
  for (double t : horizons) {
    ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(t, steps_per_unit);
    cfg.radius = base.radius;
    cfg.paths = base.paths;
    cfg.master_seed = base.master_seed;
    cfg.mode = base.mode;
    cfg.bins = base.bins;
    cfg.clamp = base.clamp;
    out.push_back({t, run_experiment(cfg, exec).stats});
  }
  return out;
}

ScalingReport scaling_check(const ExperimentConfig& cfg, double lambda, const Execution& exec) {
  cfg.validate();
  if (!(lambda > 0.0)) throw InputError("scaling factor lambda must be positive");
  if (cfg.mode == Mode::pursuit) throw InputError("scaling check applies to taut modes only");
  const EndMode end = cfg.mode == Mode::taut_fixed ? EndMode::fixed : EndMode::free;
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.steps);
  std::vector<double> dev_unit(cfg.paths);
  std::vector<double> dev_lambda(cfg.paths);
  ProgressCounter progress(exec, cfg.paths);

  parallel_for(cfg.paths, exec.threads, [&](std::size_t i) {
    const SampledPath w = simulate_wiener(grid, derive_seed(cfg.master_seed, i));
    const double base = std::sqrt(taut_energy(w, cfg.radius, end).energy_value);
    const double unit =
        std::sqrt(taut_energy(rescale_to_unit(w, cfg.horizon), cfg.radius / std::sqrt(cfg.horizon), end).energy_value);
    const double scaled =
        std::sqrt(taut_energy(scale_path(w, lambda * lambda, lambda), lambda * cfg.radius, end).energy_value);
    const double denom = std::max(base, 1e-300);
    dev_unit[i] = std::abs(unit - base) / denom;
    dev_lambda[i] = std::abs(scaled - base) / denom;
    progress.tick();
  });

  ScalingReport report;
  report.paths = cfg.paths;
  report.max_rel_dev_unit = *std::max_element(dev_unit.begin(), dev_unit.end());
  report.max_rel_dev_lambda = *std::max_element(dev_lambda.begin(), dev_lambda.end());
  return report;
}

std::vector<FreeKnotPoint> free_knot_estimate(const std::vector<double>& eps_list, std::size_t paths,
                                              std::size_t steps, Seed master_seed, const Execution& exec) {
  if (paths < 1) throw InputError("free_knot_estimate needs at least one path");
  for (double eps : eps_list) {
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("free-knot eps must lie in (0, 1)");
  }
  const TimeGrid grid = TimeGrid::uniform(1.0, steps);
  const std::size_t ne = eps_list.size();
  std::vector<double> value(paths * ne);
  std::vector<double> knots(paths * ne);
  std::vector<double> excess(paths * ne);
  ProgressCounter progress(exec, paths);

  parallel_for(paths, exec.threads, [&](std::size_t i) {
    const SampledPath w = simulate_wiener(grid, derive_seed(master_seed, i));
    for (std::size_t e = 0; e < ne; ++e) {
      const double eps = eps_list[e];
      const FreeKnotString g = free_knot_string(w, eps);
      value[i * ne + e] = eps * std::sqrt(energy(g.path));
      knots[i * ne + e] = static_cast<double>(g.crossings() + 1) * eps * eps;
      excess[i * ne + e] = sup_distance(g.path, w) - eps;
    }
    progress.tick();
  });

  std::vector<FreeKnotPoint> out;
  for (std::size_t e = 0; e < ne; ++e) {
    MomentAccumulator v;
    MomentAccumulator k;
    double worst = -eps_list[e];
    for (std::size_t i = 0; i < paths; ++i) {
      v.add(value[i * ne + e]);
      k.add(knots[i * ne + e]);
      worst = std::max(worst, excess[i * ne + e]);
    }
    const double eps = eps_list[e];
    const bool coarse = static_cast<double>(steps) * eps * eps / 4.0 < 100.0;
    out.push_back({eps, v.mean(), v.standard_error(), k.mean(), worst, coarse});
  }
  return out;
}

}  // namespace tautband
