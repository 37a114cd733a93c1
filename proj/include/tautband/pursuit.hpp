#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tautband/paths.hpp"
#include "tautband/stats.hpp"

namespace tautband {

/// Speed strategy x'(t) = b(x(t) - W(t)) of the Markovian pursuit.
struct SpeedLaw {
  std::function<double(double)> b;
  double clamp = 0.99;

  /// Throws InputError unless b(0) = 0 and b(-x) = -b(x) on a symmetric probe set
  /// (tolerance 1e-12 relative), and clamp is in (0, 1).
  void validate() const;
};

/// b(x) = -(pi/2) tan(pi x / 2). Throws InputError for |x| >= 1.
double optimal_speed(double x);

SpeedLaw optimal_law(double clamp = 0.99);

/// cos^2(pi x / 2) on [-1, 1], zero outside.
double stationary_density(double x);

/// Fisher information of a density on [-1, 1] by central differences and the
/// trapezoid rule on `points` equally spaced probes. Where p vanishes at an
/// endpoint the integrand is replaced by its limit, extrapolated from the
/// neighbouring probes. Throws InputError if p <= 0 somewhere inside.
double fisher_information(const std::function<double(double)>& p, std::size_t points = 100'000);

struct PursuitRun {
  SampledPath pursuit_path;
  SampledPath distance_path;
  double energy_rate;
  double sqrt_rate;
  Histogram occupancy;
  std::size_t clamp_hits;
};

/// Explicit scheme h_i = h_{i-1} + dt * b(h_{i-1} - W_{i-1}), projected onto
/// [W_i - clamp, W_i + clamp]. Occupancy counts X = h - W at knots 1..N.
/// Throws InputError on a non-uniform grid or W(0) != 0.
PursuitRun simulate_pursuit(const SampledPath& w, const SpeedLaw& law, std::size_t bins = 50);

/// Probability mass of cos^2(pi x / 2) in each bin of `h` (analytic).
std::vector<double> stationary_bin_masses(const Histogram& h);

/// L1 distance between the empirical bin frequencies of h and the stationary masses.
double occupancy_l1_distance(const Histogram& h);

/// Divergence test for the integral of 1/p0 near +-1, p0 = exp(2 * int_0^x b).
/// Integrates over dyadic shells [1 - 2^-k, 1 - 2^-(k+1)], k = 1..shells, and
/// reports divergence when the shell integrals stop shrinking (ratio of
/// consecutive shells >= 0.75 over the last few shells) at both ends.
bool entrance_boundary_check(const SpeedLaw& law, std::size_t shells = 30);

}  // namespace tautband
