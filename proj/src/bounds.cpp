#include "tautband/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tautband/errors.hpp"
#include "tautband/numeric.hpp"

namespace tautband {

using std::numbers::pi;

namespace {

constexpr double kSeriesTol = 1e-12;

// Upper tail of the standard normal.
double normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

double isoperimetric_upper() { return 0.5 * pi; }

ExitTimeMoments exit_time_moments() {
  constexpr double kUpper = 40.0;
  constexpr std::size_t kCells = 40'000;
  const double h = kUpper / static_cast<double>(kCells);
  auto f = [](double x) {
    const double e = std::exp(-x);
    return 2.0 * x * e / (1.0 + e * e);
  };
  double sum = f(0.0) + f(kUpper);
  for (std::size_t j = 1; j < kCells; ++j) {
    sum += (j % 2 == 1 ? 4.0 : 2.0) * f(h * static_cast<double>(j));
  }
  return {1.0, sum * h / 3.0};
}

double free_knot_upper(const ExitTimeMoments& m) { return 2.0 * std::sqrt(m.e2 / m.e1); }

double free_knot_upper() { return free_knot_upper(exit_time_moments()); }

namespace {

// Below this y the alternating series cancel badly; the Poisson-summed forms
// sum_n exp(-(2n+1)^2 pi^2 / (2 y^2)) (...) have positive terms only.
constexpr double kSmallRange = 1.5;

}  // namespace

double range_cdf(double y) {
  if (y < 0.0 || std::isnan(y)) throw InputError("range_cdf: y must be >= 0");
  if (y == 0.0) return 0.0;
  double p = 0.0;
  if (y < kSmallRange) {
    for (int n = 0;; ++n) {
      const double c = (2.0 * n + 1) * (2.0 * n + 1) * pi * pi;
      const double term = std::exp(-c / (2.0 * y * y)) * (8.0 / (y * y) + 8.0 / c);
      p += term;
      if (term < kSeriesTol * p || term == 0.0) break;
    }
  } else {
    const double a = y / std::numbers::sqrt2;
    double sum = 0.0;
    for (int k = 1;; ++k) {
      const double term = k * std::erfc(k * a);
      sum += (k % 2 == 1 ? -term : term);
      if (term < kSeriesTol) break;
    }
    p = 1.0 + 4.0 * sum;
  }
  return std::clamp(p, 0.0, 1.0);
}

double range_density(double y) {
  if (y < 0.0 || std::isnan(y)) throw InputError("range_density: y must be >= 0");
  if (y == 0.0) return 0.0;
  double sum = 0.0;
  if (y < kSmallRange) {
    const double y2 = y * y;
    for (int n = 0;; ++n) {
      const double c = (2.0 * n + 1) * (2.0 * n + 1) * pi * pi;
      const double term = std::exp(-c / (2.0 * y2)) * (8.0 * c / (y2 * y2 * y) - 8.0 / (y2 * y));
      sum += term;
      if (std::abs(term) < kSeriesTol * std::abs(sum) || term == 0.0) break;
    }
    return sum;
  }
  for (int k = 1;; ++k) {
    const double kk = static_cast<double>(k) * k;
    const double term = kk * std::exp(-0.5 * kk * y * y);
    sum += (k % 2 == 1 ? term : -term);
    if (term < kSeriesTol) break;
  }
  return 4.0 * std::sqrt(2.0 / pi) * sum;
}

double osc_second_moment(double x) {
  if (x < 0.0 || std::isnan(x)) throw InputError("osc_second_moment: x must be >= 0");
  constexpr int kMaxTerms = 2'000'000;
  const double root2pi = std::sqrt(2.0 * pi);
  auto term = [&](int k) {
    const double kd = k;
    return (4.0 * kd * x * x + 1.0 / kd) * root2pi * normal_tail(2.0 * kd * x) -
           2.0 * x * std::exp(-2.0 * kd * kd * x * x);
  };
  double sum = 0.0;
  int k = 1;
  for (; k <= kMaxTerms; ++k) {
    const double t = term(k);
    sum += (k % 2 == 1 ? t : -t);
    if (std::abs(t) < kSeriesTol) break;
  }
  if (k > kMaxTerms) {
    // Slowly decaying alternating tail (x near 0): add half the next term.
    const double t = term(k);
    sum += 0.5 * (k % 2 == 1 ? t : -t);
  }
  return 4.0 * std::sqrt(2.0 / pi) * sum;
}

OscillationBound oscillation_lower() {
  constexpr double kLo = 0.05;
  constexpr double kHi = 2.0;
  auto objective = [](double x) { return x * x * osc_second_moment(x); };

  // Unimodality scan at resolution 1e-3 before the golden-section search.
  const std::size_t n = static_cast<std::size_t>(std::lround((kHi - kLo) / 1e-3));
  std::vector<double> vals(n + 1);
  std::size_t arg = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    vals[i] = objective(kLo + (kHi - kLo) * static_cast<double>(i) / static_cast<double>(n));
    if (vals[i] > vals[arg]) arg = i;
  }
  bool unimodal = true;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool rising = vals[i] > vals[i - 1];
    if ((i <= arg && !rising) || (i > arg && rising)) unimodal = false;
  }
  double best_x = kLo + (kHi - kLo) * static_cast<double>(arg) / static_cast<double>(n);
  double best = vals[arg];
  if (unimodal) {
    const Minimum m = golden_section_minimize([&](double x) { return -objective(x); }, kLo, kHi, 1e-6);
    best_x = m.x;
    best = -m.value;
  }
  return {std::sqrt(best), best_x, best};
}

BoundReport bound_report() {
  const ExitTimeMoments m = exit_time_moments();
  const OscillationBound osc = oscillation_lower();
  return {isoperimetric_upper(), free_knot_upper(m), osc.bound, m.e1, m.e2, osc.best_x, osc.objective};
}

}  // namespace tautband
