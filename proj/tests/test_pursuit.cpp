#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tautband/errors.hpp"
#include "tautband/pursuit.hpp"

using namespace tautband;

constexpr double kPi = std::numbers::pi;

TEST_CASE("optimal speed") {
  CHECK(optimal_speed(0.0) == 0.0);
  CHECK(optimal_speed(0.5) == doctest::Approx(-kPi / 2));
  CHECK(optimal_speed(-0.5) == doctest::Approx(kPi / 2));
  CHECK(optimal_speed(0.9999) < -1000.0);
  CHECK_THROWS_AS(optimal_speed(1.0), InputError);
  CHECK_THROWS_AS(optimal_speed(-1.5), InputError);
}

TEST_CASE("stationary density") {
  CHECK(stationary_density(0.0) == 1.0);
  CHECK(stationary_density(1.0) == doctest::Approx(0.0));
  CHECK(stationary_density(-1.0) == doctest::Approx(0.0));
  const std::size_t n = 200000;
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
    sum += (i == 0 || i == n ? 0.5 : 1.0) * stationary_density(x);
  }
  CHECK(std::abs(sum * 2.0 / static_cast<double>(n) - 1.0) < 1e-8);
}

TEST_CASE("fisher information") {
  CHECK(std::abs(fisher_information(stationary_density) - kPi * kPi) < 1e-4);
  CHECK(fisher_information([](double) { return 0.5; }) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fisher_information([](double x) { return x - 0.2; }), InputError);
  // Other even densities vanishing at the ends carry more information.
  for (double a : {1.5, 3.0, 4.0}) {
    const double norm = 2.0 * a / (a + 1.0);
    const double info = fisher_information([a, norm](double x) { return (1.0 - std::pow(std::abs(x), a)) / norm; });
    CHECK(info >= kPi * kPi - 1e-3);
  }
  CHECK(fisher_information([](double x) { return 0.75 * (1 - x * x); }, 100000) >= kPi * kPi - 1e-3);
}

TEST_CASE("speed law validation") {
  CHECK_NOTHROW(optimal_law().validate());
  CHECK_THROWS_AS((SpeedLaw{[](double x) { return x * x; }, 0.99}).validate(), InputError);
  CHECK_THROWS_AS((SpeedLaw{[](double x) { return -x + 0.1; }, 0.99}).validate(), InputError);
  CHECK_THROWS_AS((SpeedLaw{[](double x) { return -x; }, 1.0}).validate(), InputError);
}

TEST_CASE("entrance boundary") {
  CHECK(entrance_boundary_check(optimal_law()));
  CHECK_FALSE(entrance_boundary_check(SpeedLaw{[](double) { return 0.0; }, 0.99}));
  CHECK_FALSE(entrance_boundary_check(SpeedLaw{[](double x) { return -x; }, 0.99}));
}

TEST_CASE("pursuit of the zero path stays at zero") {
  const SampledPath w(TimeGrid::uniform(10.0, 1000), std::vector<double>(1001, 0.0));
  const PursuitRun run = simulate_pursuit(w, optimal_law());
  CHECK(run.energy_rate == 0.0);
  for (double v : run.pursuit_path.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(simulate_pursuit(SampledPath(TimeGrid({0, 1, 3}), {0, 0, 0}), optimal_law()), InputError);
}

TEST_CASE("clamp invariant and oddness") {
  const SampledPath w = simulate_wiener(TimeGrid::uniform(100.0, 10000), Seed{12});
  const PursuitRun run = simulate_pursuit(w, optimal_law());
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(std::abs(run.distance_path[i]) <= 0.99);
  CHECK(run.occupancy.total() == 10000);

  std::vector<double> neg(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
  const PursuitRun mirrored = simulate_pursuit(SampledPath(w.grid(), neg), optimal_law());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(mirrored.pursuit_path[i] == -run.pursuit_path[i]);
  CHECK(mirrored.energy_rate == run.energy_rate);
}

TEST_CASE("energy rate and occupancy on long runs") {
  const TimeGrid g = TimeGrid::uniform(1000.0, 1'000'000);
  double rate = 0.0;
  for (std::uint64_t k = 0; k < 8; ++k) {
    const PursuitRun run = simulate_pursuit(simulate_wiener(g, Seed{k}), optimal_law());
    rate += run.energy_rate / 8;
    CHECK(occupancy_l1_distance(run.occupancy) < 0.05);
  }
  CHECK(std::abs(rate - kPi * kPi / 4) < 0.1 * kPi * kPi / 4);
}

TEST_CASE("optimal law beats scaled tangent laws") {
  const TimeGrid g = TimeGrid::uniform(400.0, 400000);
  auto mean_rate = [&](double c) {
    SpeedLaw law{[c](double x) { return -c * std::tan(kPi * x / 2); }, 0.99};
    double s = 0;
    for (std::uint64_t k = 0; k < 4; ++k) s += simulate_pursuit(simulate_wiener(g, Seed{k}), law).energy_rate;
    return s / 4;
  };
  const double best = mean_rate(kPi / 2);
  CHECK(mean_rate(0.8) >= best - 0.1);
  CHECK(mean_rate(3.0) >= best - 0.1);
}

TEST_CASE("stationary bin masses") {
  const Histogram h(-1.0, 1.0, 50);
  const auto m = stationary_bin_masses(h);
  double total = 0;
  for (double x : m) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m[24] == doctest::Approx(m[25]));
}
