#include "tautband/tautstring.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "tautband/errors.hpp"
#include "tautband/numeric.hpp"

namespace tautband {

Tube::Tube(TimeGrid grid, std::vector<double> lower, std::vector<double> upper, double start,
           EndConstraint end)
    : grid_(std::move(grid)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      start_(start),
      end_(end) {
  const std::size_t n = grid_.size();
  if (lower_.size() != n || upper_.size() != n) {
    throw InputError("tube bounds must have one entry per knot (" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw InfeasibleError(i, "non-finite bound");
    }
    if (lower_[i] > upper_[i]) {
      throw InfeasibleError(i, "lower bound " + std::to_string(lower_[i]) + " exceeds upper bound " +
                                   std::to_string(upper_[i]));
    }
  }
  if (!(lower_[0] <= start_ && start_ <= upper_[0])) {
    throw InfeasibleError(0, "start value outside [lower, upper]");
  }
  if (const auto* fixed = std::get_if<FixedAt>(&end_)) {
    if (!(lower_[n - 1] <= fixed->value && fixed->value <= upper_[n - 1])) {
      throw InfeasibleError(n - 1, "fixed end value outside [lower, upper]");
    }
  } else {
    const auto& iv = std::get<Interval>(end_);
    if (!(iv.lo <= iv.hi)) {
      throw InfeasibleError(n - 1, "end interval is empty");
    }
    if (std::max(iv.lo, lower_[n - 1]) > std::min(iv.hi, upper_[n - 1])) {
      throw InfeasibleError(n - 1, "end interval misses [lower, upper]");
    }
  }
}

Interval Tube::end_range() const noexcept {
  const double lo = lower_.back();
  const double hi = upper_.back();
  if (const auto* fixed = std::get_if<FixedAt>(&end_)) return {fixed->value, fixed->value};
  const auto& iv = std::get<Interval>(end_);
  return {std::max(lo, iv.lo), std::min(hi, iv.hi)};
}

double Tube::width_scale() const noexcept {
  double w = 0.0;
  for (std::size_t i = 0; i < size(); ++i) w = std::max(w, upper_[i] - lower_[i]);
  return w > 0.0 ? w : 1.0;
}

Tube Tube::with_end(EndConstraint end) const {
  return Tube(grid_, lower_, upper_, start_, end);
}

namespace {

struct Vertex {
  double t;
  double v;
  std::size_t knot;
};

// slope(a, c) < slope(a, b); both b and c lie to the right of a.
bool below(const Vertex& a, const Vertex& b, const Vertex& c) {
  return (c.v - a.v) * (b.t - a.t) < (b.v - a.v) * (c.t - a.t);
}

// slope(a, c) > slope(a, b)
bool above(const Vertex& a, const Vertex& b, const Vertex& c) {
  return (c.v - a.v) * (b.t - a.t) > (b.v - a.v) * (c.t - a.t);
}

// Deque over a vector; the apex of the funnel is always element 0.
class Chain {
 public:
  void reset(const Vertex& apex) {
    pts_.clear();
    head_ = 0;
    pts_.push_back(apex);
  }
  std::size_t size() const { return pts_.size() - head_; }
  const Vertex& operator[](std::size_t i) const { return pts_[head_ + i]; }
  const Vertex& from_back(std::size_t i) const { return pts_[pts_.size() - 1 - i]; }
  void pop_front() { ++head_; }
  void pop_back() { pts_.pop_back(); }
  void push_back(const Vertex& p) { pts_.push_back(p); }

 private:
  std::vector<Vertex> pts_;
  std::size_t head_ = 0;
};

// Knot values of the fixed-end taut string. Bounds at knots 0 and n are
// ignored in favour of `start` and `end`.
std::vector<double> funnel(std::span<const double> t, std::span<const double> lo,
                           std::span<const double> hi, double start, double end) {
  const std::size_t n = t.size() - 1;
  Chain up;
  Chain low;
  const Vertex origin{t[0], start, 0};
  up.reset(origin);
  low.reset(origin);
  std::vector<Vertex> path{origin};

  for (std::size_t i = 1; i <= n; ++i) {
    const Vertex p{t[i], i == n ? end : hi[i], i};
    const Vertex q{t[i], i == n ? end : lo[i], i};

    if (low.size() >= 2 && below(low[0], low[1], p)) {
      do {
        path.push_back(low[1]);
        low.pop_front();
      } while (low.size() >= 2 && below(low[0], low[1], p));
      up.reset(low[0]);
      up.push_back(p);
    } else {
      while (up.size() >= 2 && !above(up.from_back(1), up.from_back(0), p)) up.pop_back();
      up.push_back(p);
    }

    if (up.size() >= 2 && above(up[0], up[1], q)) {
      do {
        path.push_back(up[1]);
        up.pop_front();
      } while (up.size() >= 2 && above(up[0], up[1], q));
      low.reset(up[0]);
      low.push_back(q);
    } else {
      while (low.size() >= 2 && !below(low.from_back(1), low.from_back(0), q)) low.pop_back();
      low.push_back(q);
    }
  }
  // With the last gate pinned, the upper side has collapsed onto the final segment.
  for (std::size_t j = 1; j < up.size(); ++j) path.push_back(up[j]);

  std::vector<double> values(n + 1);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const Vertex& a = path[s];
    const Vertex& b = path[s + 1];
    values[a.knot] = a.v;
    const double slope = (b.v - a.v) / (b.t - a.t);
    for (std::size_t k = a.knot + 1; k < b.knot; ++k) values[k] = a.v + slope * (t[k] - a.t);
  }
  values[n] = end;
  return values;
}

TautStringResult finalize(const Tube& tube, std::vector<double> values) {
  const auto& lower = tube.lower();
  const auto& upper = tube.upper();
  const double slack = 1e-9 * tube.width_scale();
  std::vector<Contact> contact(values.size(), Contact::interior);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double& v = values[i];
    if (v < lower[i] - slack * (1.0 + std::abs(v)) || v > upper[i] + slack * (1.0 + std::abs(v))) {
      throw InvariantError("taut string leaves the tube at knot " + std::to_string(i));
    }
    // Round-off only: interpolated values may sit an ulp outside the box.
    v = std::clamp(v, lower[i], upper[i]);
    const double tol = 1e-12 * (1.0 + std::abs(v));
    if (v >= upper[i] - tol) {
      contact[i] = Contact::upper;
    } else if (v <= lower[i] + tol) {
      contact[i] = Contact::lower;
    }
  }
  SampledPath path(tube.grid(), std::move(values));
  const double e = energy(path);
  return {std::move(path), e, std::move(contact)};
}

std::vector<double> solve_fixed(const Tube& tube, double end) {
  return funnel(tube.grid().times(), tube.lower(), tube.upper(), tube.start(), end);
}

std::vector<double> solve_interval(const Tube& tube) {
  const Interval range = tube.end_range();
  const auto t = tube.grid().times();
  const std::size_t n = t.size() - 1;
  const double horizon = t[n];
  std::vector<double> mt(2 * n + 1);
  std::vector<double> mlo(2 * n + 1);
  std::vector<double> mhi(2 * n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    mt[i] = t[i];
    mlo[i] = tube.lower()[i];
    mhi[i] = tube.upper()[i];
    mt[2 * n - i] = 2.0 * horizon - t[i];
    mlo[2 * n - i] = mlo[i];
    mhi[2 * n - i] = mhi[i];
  }
  mlo[n] = range.lo;
  mhi[n] = range.hi;
  auto mirrored = funnel(mt, mlo, mhi, tube.start(), tube.start());
  mirrored.resize(n + 1);
  mirrored[n] = std::clamp(mirrored[n], range.lo, range.hi);
  return mirrored;
}

}  // namespace

TautStringResult solve(const Tube& tube) {
  if (const auto* fixed = std::get_if<FixedAt>(&tube.end())) {
    return finalize(tube, solve_fixed(tube, fixed->value));
  }
  return finalize(tube, solve_interval(tube));
}

TautStringResult solve_by_end_search(const Tube& tube, double tol) {
  if (std::holds_alternative<FixedAt>(tube.end())) return solve(tube);
  const Interval range = tube.end_range();
  auto probe = [&](double v) { return energy(SampledPath(tube.grid(), solve_fixed(tube, v))); };
  const Minimum best = golden_section_minimize(probe, range.lo, range.hi, tol);
  return finalize(tube, solve_fixed(tube, best.x));
}

TautStringResult brute_force_oracle(const Tube& tube, OracleOptions opts) {
  const auto& g = tube.grid();
  const auto& lower = tube.lower();
  const auto& upper = tube.upper();
  const std::size_t n = g.size() - 1;
  const Interval range = tube.end_range();
  const bool fixed_end = std::holds_alternative<FixedAt>(tube.end());

  std::vector<double> inv_dt(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) inv_dt[i] = 1.0 / g.step(i);

  const double target = std::clamp(tube.start(), range.lo, range.hi);
  std::vector<double> h(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double line = tube.start() + (target - tube.start()) * g[i] / g.horizon();
    h[i] = std::clamp(line, lower[i], upper[i]);
  }
  h[0] = tube.start();
  h[n] = std::clamp(h[n], range.lo, range.hi);

  const double stop = opts.rel_tol * tube.width_scale();
  std::size_t updates = 0;
  while (true) {
    double max_change = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double w1 = inv_dt[i];
      const double w2 = inv_dt[i + 1];
      const double x = std::clamp((w1 * h[i - 1] + w2 * h[i + 1]) / (w1 + w2), lower[i], upper[i]);
      max_change = std::max(max_change, std::abs(x - h[i]));
      h[i] = x;
    }
    if (!fixed_end) {
      const double x = std::clamp(h[n - 1], range.lo, range.hi);
      max_change = std::max(max_change, std::abs(x - h[n]));
      h[n] = x;
    }
    updates += n;
    if (max_change < stop) break;
    if (updates > opts.max_updates) {
      throw InvariantError("brute_force_oracle: no convergence after " + std::to_string(updates) +
                           " coordinate updates");
    }
  }
  return finalize(tube, std::move(h));
}

Tube wiener_tube(const SampledPath& w, double r, EndMode mode) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InputError("tube radius must be positive");
  }
  const auto values = w.values();
  std::vector<double> lower(values.size());
  std::vector<double> upper(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    lower[i] = values[i] - r;
    upper[i] = values[i] + r;
  }
  const double wt = w.back();
  EndConstraint end = mode == EndMode::fixed ? EndConstraint{FixedAt{wt}} : EndConstraint{Interval{wt - r, wt + r}};
  return Tube(w.grid(), std::move(lower), std::move(upper), 0.0, end);
}

TautStringResult taut_energy(const SampledPath& w, double r, EndMode mode) {
  return solve(wiener_tube(w, r, mode));
}

FreeKnotString free_knot_string(const SampledPath& w, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InputError("free_knot_string: eps must be positive");
  }
  const double threshold = 0.5 * eps;
  std::vector<std::size_t> knots{0};
  double ref = w[0];
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (std::abs(w[i] - ref) >= threshold) {
      knots.push_back(i);
      ref = w[i];
    }
  }
  const auto& g = w.grid();
  std::vector<double> values(w.size());
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const std::size_t a = knots[s];
    const std::size_t b = knots[s + 1];
    const double slope = (w[b] - w[a]) / (g[b] - g[a]);
    for (std::size_t k = a; k < b; ++k) values[k] = w[a] + slope * (g[k] - g[a]);
  }
  for (std::size_t k = knots.back(); k < w.size(); ++k) values[k] = ref;
  return {SampledPath(g, std::move(values)), std::move(knots)};
}

}  // namespace tautband
