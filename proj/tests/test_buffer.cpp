#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "tautband/buffer.hpp"
#include "tautband/errors.hpp"

using namespace tautband;

namespace {

TrafficTrace random_trace(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrafficTrace t;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = 0.5 + 2.0 * unit(rng);
    t.inflow.push_back(s);
    t.capacity.push_back(s * unit(rng));
  }
  return t;
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("trace validation") {
  CHECK_THROWS_AS((TrafficTrace{{1.0}, {2.0}}).validate(), InputError);
  CHECK_THROWS_AS((TrafficTrace{{0.0}, {0.0}}).validate(), InputError);
  CHECK_THROWS_AS((TrafficTrace{{1.0, 1.0}, {0.5}}).validate(), InputError);
  CHECK_THROWS_AS(loss_band(TrafficTrace{{1.0}, {0.5}}, -1.0), InputError);
}

TEST_CASE("penalty functions") {
  CHECK(PenaltyFunction::parse("quad")(0.5) == 0.25);
  CHECK(PenaltyFunction::parse("exp")(0.0) == 0.0);
  CHECK(PenaltyFunction::parse("hinge")(0.25) == 0.0);
  CHECK(PenaltyFunction::parse("poly:1,0,2")(0.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(PenaltyFunction::parse("poly:0,-1"), InputError);
  CHECK_THROWS_AS(PenaltyFunction::parse("poly:0,1,-1"), InputError);
  CHECK_THROWS_AS(PenaltyFunction::parse("poly:1,x"), InputError);
  CHECK_THROWS_AS(PenaltyFunction::parse("cubic"), InputError);
}

TEST_CASE("no excess means no loss") {
  const TrafficTrace t{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}};
  const PenaltyFunction phi = PenaltyFunction::polynomial({0.5, 0.0, 1.0});
  for (double b : {0.0, 1.0}) {
    const LossSchedule s = optimal_losses(t, b, phi);
    for (double l : s.losses) CHECK(l == doctest::Approx(0.0));
    CHECK(penalty(s, t, phi) == doctest::Approx(0.5 * 6.0));
  }
}

TEST_CASE("zero buffer forces the excess to be lost") {
  std::mt19937_64 rng(4);
  const TrafficTrace t = random_trace(rng, 15);
  const LossSchedule opt = optimal_losses(t, 0.0, PenaltyFunction::quadratic());
  const LossSchedule fifo = fifo_losses(t, 0.0);
  for (std::size_t j = 0; j < t.size(); ++j) {
    CHECK(opt.losses[j] == doctest::Approx(t.inflow[j] - t.capacity[j]));
    CHECK(fifo.losses[j] == doctest::Approx(opt.losses[j]));
  }
}

TEST_CASE("fifo") {
  std::mt19937_64 rng(5);
  const TrafficTrace t = random_trace(rng, 20);
  const LossSchedule huge = fifo_losses(t, 1e6);
  for (double l : huge.losses) CHECK(l == 0.0);

  const double b = 1.5;
  const LossSchedule f = fifo_losses(t, b);
  double upper = 0.0, acc = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    upper += t.inflow[j] - t.capacity[j];
    acc += f.losses[j];
    CHECK(acc == doctest::Approx(std::max(0.0, upper - b)).epsilon(1e-12));
  }
  CHECK_NOTHROW(check_schedule(f, t, b));
}

TEST_CASE("penalty") {
  const TrafficTrace t{{1.0, 2.0}, {0.5, 0.5}};
  LossSchedule zero{{0.0, 0.0}, {0.5, 2.0}};
  CHECK(penalty(zero, t, PenaltyFunction::exponential()) == 0.0);
  LossSchedule all{{1.0, 2.0}, {0.0, 0.0}};
  CHECK(penalty(all, t, PenaltyFunction::polynomial({0.0, 1.0})) == doctest::Approx(3.0));
  LossSchedule bad{{1.5, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(penalty(bad, t, PenaltyFunction::quadratic()), InputError);
}

TEST_CASE("optimal beats fifo and matches the lattice oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const TrafficTrace t = random_trace(rng, 20);
    const double b = 3.0 * unit(rng);
    for (const auto& phi : {PenaltyFunction::quadratic(), PenaltyFunction::exponential(), PenaltyFunction::hinge_squared()}) {
      const LossSchedule opt = optimal_losses(t, b, phi);
      CHECK_FALSE(opt.used_fallback);
      const double f = penalty(opt, t, phi);
      CHECK(f <= penalty(fifo_losses(t, b), t, phi) * (1 + 1e-12) + 1e-12);
      const double dp = penalty(dp_losses(t, b, phi), t, phi);
      CHECK(f <= dp * (1 + 1e-9) + 1e-12);
      if (phi.name() != "hinge") CHECK(std::abs(f - dp) <= 1e-2 * dp + 1e-9);
      for (double l : opt.losses) CHECK(l >= 0.0);
    }
  }
}

TEST_CASE("pinned-end schedule does not depend on the penalty") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const TrafficTrace t = random_trace(rng, 20);
    const double b = 2.0;
    const double pinned = loss_band(t, b).end_range().lo;
    const LossSchedule s = optimal_losses_with_end(t, b, pinned);
    CHECK(total(s.losses) == doctest::Approx(pinned));
    // The same path minimizes F for both penalties: lattice solutions cannot beat it.
    for (const auto& phi : {PenaltyFunction::quadratic(), PenaltyFunction::exponential()}) {
      const double f = penalty(s, t, phi);
      LossSchedule perturbed = s;
      for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double d = 1e-3 * std::min(perturbed.losses[j + 1], t.inflow[j] - perturbed.losses[j]);
        perturbed.losses[j] += d;
        perturbed.losses[j + 1] -= d;
        bool feasible = true;
        double level = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          level += t.inflow[i] - t.capacity[i] - perturbed.losses[i];
          perturbed.buffer_levels[i] = level;
          if (level < 0 || level > b) feasible = false;
        }
        if (feasible) CHECK(penalty(perturbed, t, phi) >= f - 1e-12);
        perturbed = s;
      }
    }
  }
}

TEST_CASE("schedule checker catches violations") {
  const TrafficTrace t{{2.0, 2.0}, {1.0, 1.0}};
  LossSchedule s{{0.0, 0.0}, {1.0, 2.0}};
  CHECK_NOTHROW(check_schedule(s, t, 2.0));
  CHECK_THROWS_AS(check_schedule(s, t, 1.5), InvariantError);
  s.buffer_levels[1] = 1.9;
  CHECK_THROWS_AS(check_schedule(s, t, 2.0), InvariantError);
}
