#include <doctest.h>

#include <cmath>
#include <vector>

#include "tautband/errors.hpp"
#include "tautband/stats.hpp"

using namespace tautband;

TEST_CASE("histogram binning") {
  Histogram h(0.0, 1.0, 4);
  for (double x : {0.0, 0.25, 0.3, 0.999, 1.0, -0.1, 1.2}) h.add(x);
  CHECK(h.counts == std::vector<std::uint64_t>{1, 2, 0, 2});
  CHECK(h.underflow == 1);
  CHECK(h.overflow == 1);
  CHECK(h.total() == 7);
  CHECK(h.edge(2) == doctest::Approx(0.5));

  Histogram other(0.0, 1.0, 4);
  other.add(0.6);
  h.merge(other);
  CHECK(h.counts[2] == 1);
  CHECK_THROWS_AS(h.merge(Histogram(0.0, 2.0, 4)), InvariantError);
}

TEST_CASE("moment accumulator merges like a single pass") {
  std::vector<double> xs;
  for (int i = 0; i < 101; ++i) xs.push_back(std::sin(0.37 * i) * 3.0 + 1.0);
  MomentAccumulator all, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 40 ? left : right).add(xs[i]);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));

  double mean = 0, sq = 0;
  for (double x : xs) mean += x, sq += x * x;
  mean /= 101.0;
  sq /= 101.0;
  CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(all.second_moment() == doctest::Approx(sq).epsilon(1e-12));
  CHECK(all.variance() == doctest::Approx(sq - mean * mean).epsilon(1e-10));
  CHECK(all.standard_error() == doctest::Approx(std::sqrt(all.variance() * 101.0 / 100.0 / 101.0)));
}

TEST_CASE("median") {
  CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
}
