#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "tautband/paths.hpp"

namespace tautband {

struct FixedAt {
  double value;
};

struct Interval {
  double lo;
  double hi;
};

using EndConstraint = std::variant<FixedAt, Interval>;

/// Per-knot corridor [lower[i], upper[i]] with a pinned start value and a
/// right-end constraint. Construction throws InfeasibleError (naming the
/// offending knot) when the feasible set is empty.
class Tube {
 public:
  Tube(TimeGrid grid, std::vector<double> lower, std::vector<double> upper, double start,
       EndConstraint end);

  const TimeGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double start() const noexcept { return start_; }
  const EndConstraint& end() const noexcept { return end_; }
  std::size_t size() const noexcept { return lower_.size(); }

  /// Admissible right-end values: the end constraint intersected with the last box.
  Interval end_range() const noexcept;

  /// Largest corridor width, or 1 for a degenerate tube. Used to scale tolerances.
  double width_scale() const noexcept;

  /// Same tube with a different end constraint.
  Tube with_end(EndConstraint end) const;

 private:
  TimeGrid grid_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  double start_;
  EndConstraint end_;
};

enum class Contact : char { interior, lower, upper };

struct TautStringResult {
  SampledPath path;
  double energy_value;
  std::vector<Contact> contact;
};

enum class EndMode { free, fixed };

/// Minimal-energy path through the tube.
///
/// The fixed-end case runs the funnel algorithm: the apex of the funnel is
/// the last confirmed vertex of the string, the upper side is the lower convex
/// hull of upper-bound knots and the lower side is the upper concave hull of
/// lower-bound knots seen from the apex. When a new knot closes the funnel the
/// apex advances along the opposite side. Amortized O(n).
///
/// An interval end is solved exactly by mirroring the tube about its right
/// end: the doubled problem has both ends pinned at `start`, its minimizer is
/// symmetric, and its left half is the free-end string.
TautStringResult solve(const Tube& tube);

/// Free end by golden-section search over the end value, one fixed-end solve
/// per probe. Slower than solve(); kept as an independent route for checks.
TautStringResult solve_by_end_search(const Tube& tube, double tol);

struct OracleOptions {
  double rel_tol = 1e-13;
  std::size_t max_updates = 2'000'000'000;
};

/// Cyclic projected coordinate minimization of the same quadratic program.
/// Each update is the exact one-dimensional minimizer clamped to its box.
/// Throws InvariantError if it has not settled within the update budget.
TautStringResult brute_force_oracle(const Tube& tube, OracleOptions opts = {});

/// Tube W +- r with start 0 and end W(T) (fixed) or [W(T) - r, W(T) + r] (free).
Tube wiener_tube(const SampledPath& w, double r, EndMode mode);

/// Solves wiener_tube(w, r, mode). sqrt(energy_value) is the discrete
/// minimal Sobolev norm over the r-tube.
TautStringResult taut_energy(const SampledPath& w, double r, EndMode mode);

struct FreeKnotString {
  SampledPath path;
  /// Grid indices of the stopping times, starting with 0.
  std::vector<std::size_t> knots;

  std::size_t crossings() const noexcept { return knots.size() - 1; }
};

/// Linear interpolation of w through the successive first knots at which w has
/// moved at least eps/2 away from its value at the previous stopping time; held
/// constant after the last one.
FreeKnotString free_knot_string(const SampledPath& w, double eps);

}  // namespace tautband
