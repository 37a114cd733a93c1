#pragma once

namespace tautband {

struct ExitTimeMoments {
  /// E[theta] for the exit time of |W| from [0, 1).
  double e1;
  /// E[1 / theta], equal to E[sup_{s<=1} W(s)^2] = int_0^inf x / cosh(x) dx.
  double e2;
};

struct OscillationBound {
  double bound;      ///< max over x of x * sqrt(E Y_x^2)
  double best_x;
  double objective;  ///< x^2 E Y_x^2 at best_x
};

struct BoundReport {
  double isoperimetric_upper;
  double free_knot_upper;
  double oscillation_lower;
  double e1;
  double e2;
  double best_x;
  double osc_objective_at_best_x;
};

/// pi / 2.
double isoperimetric_upper();

/// e1 = 1 (Wald identity); e2 by composite Simpson on [0, 40] with step 1e-3.
ExitTimeMoments exit_time_moments();

/// 2 sqrt(e2 / e1).
double free_knot_upper(const ExitTimeMoments& m);
double free_knot_upper();

/// P(R <= y) for the range R = max W - min W of a Wiener path on [0, 1]:
/// 1 + 4 sum_k (-1)^k k erfc(k y / sqrt 2), clamped to [0, 1]. For y < 1.5 the
/// equivalent sum_n exp(-(2n+1)^2 pi^2 / (2 y^2)) (8 / y^2 + 8 / ((2n+1)^2 pi^2))
/// is used instead. Throws InputError for y < 0.
double range_cdf(double y);

/// Density of R: 4 sqrt(2/pi) sum_k (-1)^(k+1) k^2 exp(-k^2 y^2 / 2), with the
/// matching positive-term form for y < 1.5.
double range_density(double y);

/// E[((R - 2x)_+)^2] via the closed-form series in the standard normal tail.
/// Throws InputError for x < 0.
double osc_second_moment(double x);

/// Maximizes x * sqrt(osc_second_moment(x)) over [0.05, 2].
OscillationBound oscillation_lower();

BoundReport bound_report();

}  // namespace tautband
