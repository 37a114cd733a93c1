#pragma once

#include <cmath>
#include <utility>

namespace tautband {

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi],
/// stopping once the bracket is narrower than tol.
template <class F>
Minimum golden_section_minimize(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  if (hi - lo <= tol) {
    const double mid = 0.5 * (lo + hi);
    return {mid, f(mid)};
  }
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  // Endpoints are candidates too: the minimum of a monotone f sits on the boundary.
  Minimum best = fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx < best.value) best = {x, fx};
  }
  return best;
}

}  // namespace tautband
