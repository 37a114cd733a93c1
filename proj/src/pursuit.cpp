#include "tautband/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tautband/errors.hpp"

namespace tautband {

using std::numbers::pi;

void SpeedLaw::validate() const {
  if (!b) throw InputError("speed law has no evaluator");
  if (!(clamp > 0.0 && clamp < 1.0)) throw InputError("speed law clamp must lie in (0, 1)");
  if (std::abs(b(0.0)) > 1e-12) throw InputError("speed law must vanish at 0");
  for (double x : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    const double bp = b(x);
    const double bm = b(-x);
    if (std::abs(bp + bm) > 1e-12 * (1.0 + std::abs(bp))) {
      throw InputError("speed law is not odd at x = " + std::to_string(x));
    }
  }
}

double optimal_speed(double x) {
  if (!(std::abs(x) < 1.0)) {
    throw InputError("optimal_speed: |x| must be < 1");
  }
  return -0.5 * pi * std::tan(0.5 * pi * x);
}

SpeedLaw optimal_law(double clamp) { return SpeedLaw{[](double x) { return optimal_speed(x); }, clamp}; }

double stationary_density(double x) {
  if (x < -1.0 || x > 1.0) return 0.0;
  const double c = std::cos(0.5 * pi * x);
  return c * c;
}

double fisher_information(const std::function<double(double)>& p, std::size_t points) {
  if (points < 5) throw InputError("fisher_information needs at least 5 probes");
  const std::size_t m = points;
  const double h = 2.0 / static_cast<double>(m - 1);
  std::vector<double> x(m);
  std::vector<double> px(m);
  double pmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    x[j] = j + 1 == m ? 1.0 : -1.0 + h * static_cast<double>(j);
    px[j] = p(x[j]);
    pmax = std::max(pmax, px[j]);
  }
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (!(px[j] > 0.0)) {
      throw InputError("fisher_information: density not positive at x = " + std::to_string(x[j]));
    }
  }
  std::vector<double> f(m);
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double d = (px[j + 1] - px[j - 1]) / (2.0 * h);
    f[j] = d * d / px[j];
  }
  // Endpoints: one-sided difference where p is bounded away from zero,
  // otherwise the finite limit of p'^2 / p extrapolated from inside.
  const double vanish = 1e-8 * pmax;
  if (px[0] > vanish) {
    const double d = (px[1] - px[0]) / h;
    f[0] = d * d / px[0];
  } else {
    f[0] = 2.0 * f[1] - f[2];
  }
  if (px[m - 1] > vanish) {
    const double d = (px[m - 1] - px[m - 2]) / h;
    f[m - 1] = d * d / px[m - 1];
  } else {
    f[m - 1] = 2.0 * f[m - 2] - f[m - 3];
  }
  double sum = 0.5 * (f[0] + f[m - 1]);
  for (std::size_t j = 1; j + 1 < m; ++j) sum += f[j];
  return sum * h;
}

PursuitRun simulate_pursuit(const SampledPath& w, const SpeedLaw& law, std::size_t bins) {
  law.validate();
  const auto& g = w.grid();
  if (!g.is_uniform(1e-9)) {
    throw InputError("simulate_pursuit: the scheme needs a uniform grid");
  }
  if (w[0] != 0.0) {
    throw InputError("simulate_pursuit: W(0) must be 0");
  }
  const std::size_t n = g.steps();
  const double dt = g.horizon() / static_cast<double>(n);
  const double c = law.clamp;

  std::vector<double> h(n + 1);
  std::vector<double> x(n + 1);
  Histogram occupancy(-1.0, 1.0, bins);
  std::size_t hits = 0;
  h[0] = 0.0;
  x[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double proposed = h[i - 1] + dt * law.b(x[i - 1]);
    const double lo = w[i] - c;
    const double hi = w[i] + c;
    if (proposed < lo || proposed > hi) ++hits;
    double v = std::clamp(proposed, lo, hi);
    while (v - w[i] > c) v = std::nextafter(v, -HUGE_VAL);
    while (v - w[i] < -c) v = std::nextafter(v, HUGE_VAL);
    h[i] = v;
    x[i] = h[i] - w[i];
    occupancy.add(x[i]);
  }
  SampledPath pursuit(g, std::move(h));
  const double e = energy(pursuit);
  const double rate = e / g.horizon();
  return {std::move(pursuit), SampledPath(g, std::move(x)), rate, std::sqrt(rate), std::move(occupancy), hits};
}

std::vector<double> stationary_bin_masses(const Histogram& h) {
  auto cdf = [](double x) {
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 * (x + 1.0) + std::sin(pi * x) / (2.0 * pi);
  };
  std::vector<double> mass(h.bins());
  for (std::size_t k = 0; k < h.bins(); ++k) mass[k] = cdf(h.edge(k + 1)) - cdf(h.edge(k));
  return mass;
}

double occupancy_l1_distance(const Histogram& h) {
  const auto mass = stationary_bin_masses(h);
  const double total = static_cast<double>(h.total());
  if (total == 0.0) throw InputError("occupancy histogram is empty");
  double d = static_cast<double>(h.underflow + h.overflow) / total;
  for (std::size_t k = 0; k < h.bins(); ++k) {
    d += std::abs(static_cast<double>(h.counts[k]) / total - mass[k]);
  }
  return d;
}

namespace {

// Integrals of 1/p0 over the dyadic shells approaching +1 for the law x -> sign * b(sign * x).
std::vector<double> shell_integrals(const std::function<double(double)>& b, double sign, std::size_t shells) {
  constexpr std::size_t kSub = 256;
  auto drift = [&](double x) { return sign * b(sign * x); };

  // Trapezoid on a fine grid over [a, c]; returns the integral of `fn` and
  // leaves the cumulative profile in `cum`.
  auto integrate = [](auto&& fn, double a, double c, std::vector<double>& cum) {
    const double step = (c - a) / static_cast<double>(kSub);
    cum.assign(kSub + 1, 0.0);
    double prev = fn(a);
    for (std::size_t j = 1; j <= kSub; ++j) {
      const double cur = fn(a + step * static_cast<double>(j));
      cum[j] = cum[j - 1] + 0.5 * step * (prev + cur);
      prev = cur;
    }
    return cum.back();
  };

  std::vector<double> cum;
  double big_b = 2.0 * integrate(drift, 0.0, 0.5, cum);
  std::vector<double> out;
  for (std::size_t k = 1; k <= shells; ++k) {
    const double a = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
    const double c = 1.0 - std::ldexp(1.0, -static_cast<int>(k) - 1);
    const double step = (c - a) / static_cast<double>(kSub);
    std::vector<double> bcum;
    integrate(drift, a, c, bcum);
    double total = 0.0;
    double prev = std::exp(-big_b);
    for (std::size_t j = 1; j <= kSub; ++j) {
      const double cur = std::exp(-(big_b + 2.0 * bcum[j]));
      total += 0.5 * step * (prev + cur);
      prev = cur;
    }
    out.push_back(total);
    big_b += 2.0 * bcum.back();
  }
  return out;
}

bool diverges(const std::vector<double>& shell) {
  constexpr std::size_t kTail = 5;
  if (shell.size() < kTail + 1) return false;
  for (std::size_t k = shell.size() - kTail; k < shell.size(); ++k) {
    if (!(shell[k] >= 0.75 * shell[k - 1])) return false;
  }
  return true;
}

}  // namespace

bool entrance_boundary_check(const SpeedLaw& law, std::size_t shells) {
  if (!law.b) throw InputError("speed law has no evaluator");
  return diverges(shell_integrals(law.b, 1.0, shells)) && diverges(shell_integrals(law.b, -1.0, shells));
}

}  // namespace tautband
