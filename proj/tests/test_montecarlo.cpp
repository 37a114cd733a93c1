#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tautband/errors.hpp"
#include "tautband/montecarlo.hpp"

using namespace tautband;

namespace {

ExperimentConfig small(Mode mode) {
  ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(50.0, 100.0);
  cfg.paths = 40;
  cfg.master_seed = Seed{7};
  cfg.mode = mode;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.radius = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = ExperimentConfig{};
  cfg.paths = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK_THROWS_AS(ExperimentConfig::with_steps_per_unit(1.0, 0.5), InputError);
  CHECK(parse_mode("taut_free") == Mode::taut_free);
  CHECK(parse_mode("pursuit") == Mode::pursuit);
  CHECK_THROWS_AS(parse_mode("taut"), InputError);
}

TEST_CASE("results do not depend on the thread count") {
  for (Mode m : {Mode::taut_fixed, Mode::taut_free, Mode::pursuit}) {
    const ExperimentConfig cfg = small(m);
    const ExperimentResult a = run_experiment(cfg, Execution{1, {}});
    const ExperimentResult b = run_experiment(cfg, Execution{3, {}});
    CHECK(a.per_path == b.per_path);
    CHECK(a.stats.sample_mean == b.stats.sample_mean);
    CHECK(a.stats.sample_variance == b.stats.sample_variance);
    CHECK(a.stats.histogram.counts == b.stats.histogram.counts);
    CHECK(a.occupancy.counts == b.occupancy.counts);
  }
}

TEST_CASE("summary statistics") {
  const ExperimentResult r = run_experiment(small(Mode::taut_fixed));
  const EnergyStats& s = r.stats;
  CHECK(s.count == 40);
  CHECK(s.normalized);
  CHECK(s.second_moment == doctest::Approx(s.sample_variance + s.sample_mean * s.sample_mean).epsilon(1e-12));
  CHECK(s.raw_mean == doctest::Approx(s.sample_mean * std::sqrt(50.0)).epsilon(1e-12));
  CHECK(s.histogram.total() == 40);
  CHECK(s.mean_standard_error > 0.0);
  CHECK(s.raw_variance_standard_error > 0.0);
}

TEST_CASE("free end never costs more than fixed end") {
  const ExperimentResult fixed = run_experiment(small(Mode::taut_fixed));
  const ExperimentResult free = run_experiment(small(Mode::taut_free));
  for (std::size_t i = 0; i < fixed.per_path.size(); ++i) CHECK(free.raw_per_path[i] <= fixed.raw_per_path[i] * (1 + 1e-12));
}

TEST_CASE("raw variance respects the concentration bound") {
  for (Mode m : {Mode::taut_fixed, Mode::taut_free}) {
    ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(200.0, 100.0);
    cfg.paths = 200;
    cfg.mode = m;
    const EnergyStats s = run_experiment(cfg).stats;
    CHECK(s.raw_variance <= 1.0 + 3.0 * s.raw_variance_standard_error);
  }
}

TEST_CASE("estimates with equal r / sqrt(T) agree") {
  ExperimentConfig a = ExperimentConfig::with_steps_per_unit(100.0, 100.0);
  a.paths = 200;
  a.master_seed = Seed{1};
  // Same r / sqrt(dt) too, so both carry the same discretization bias.
  ExperimentConfig b = ExperimentConfig::with_steps_per_unit(400.0, 25.0);
  b.paths = 200;
  b.radius = 2.0;
  b.master_seed = Seed{2};
  const EnergyStats sa = run_experiment(a).stats;
  const EnergyStats sb = run_experiment(b).stats;
  const double se = std::hypot(sa.mean_standard_error, sb.mean_standard_error);
  CHECK(std::abs(sa.sample_mean - sb.sample_mean) <= 3.0 * se);
}

TEST_CASE("normalized histogram is concentrated") {
  ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(250.0, 100.0);
  cfg.paths = 200;
  const EnergyStats s = run_experiment(cfg).stats;
  std::uint64_t inside = 0;
  for (std::size_t k = 0; k < s.histogram.bins(); ++k) {
    const double mid = 0.5 * (s.histogram.edge(k) + s.histogram.edge(k + 1));
    if (mid >= 0.4 && mid <= 0.9) inside += s.histogram.counts[k];
  }
  CHECK(static_cast<double>(inside) >= 0.9 * static_cast<double>(s.count));
  const auto mode = std::max_element(s.histogram.counts.begin(), s.histogram.counts.end()) - s.histogram.counts.begin();
  CHECK(s.histogram.edge(mode) >= 0.4);
  CHECK(s.histogram.edge(mode + 1) <= 0.9);
}

TEST_CASE("scaling check is exact") {
  ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(400.0, 10.0);
  cfg.paths = 20;
  for (Mode m : {Mode::taut_fixed, Mode::taut_free}) {
    cfg.mode = m;
    const ScalingReport r = scaling_check(cfg, 3.0);
    CHECK(r.paths == 20);
    CHECK(r.max_rel_dev_unit < 1e-10);
    CHECK(r.max_rel_dev_lambda < 1e-10);
  }
  cfg.mode = Mode::pursuit;
  CHECK_THROWS_AS(scaling_check(cfg, 2.0), InputError);
}

TEST_CASE("sweep shares path prefixes") {
  ExperimentConfig base;
  base.paths = 10;
  const auto pts = convergence_sweep(base, {10.0, 20.0}, 50.0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].horizon == 10.0);
  CHECK(pts[1].stats.count == 10);
  CHECK_THROWS_AS(convergence_sweep(base, {20.0, 10.0}, 50.0), InputError);
}

TEST_CASE("free-knot estimate sits between the constant and its bound") {
  const auto pts = free_knot_estimate({0.05, 0.2}, 60, 200000, Seed{3});
  REQUIRE(pts.size() == 2);
  CHECK_FALSE(pts[0].coarse_grid);
  CHECK(pts[0].mean > 0.63);
  CHECK(pts[0].mean < 2.71);
  CHECK(pts[0].max_sup_excess <= 6.0 * std::sqrt(1.0 / 200000));
  CHECK(free_knot_estimate({0.05}, 2, 1000, Seed{3})[0].coarse_grid);
  CHECK_THROWS_AS(free_knot_estimate({0.0}, 2, 1000, Seed{3}), InputError);
}
