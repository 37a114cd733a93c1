#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tautband/tautstring.hpp"

namespace tautband {

/// Per-slot inflow S_j > 0 and channel capacity 0 <= C_j <= S_j.
struct TrafficTrace {
  std::vector<double> inflow;
  std::vector<double> capacity;

  std::size_t size() const { return inflow.size(); }
  /// Throws InputError naming the first offending slot.
  void validate() const;
};

struct LossSchedule {
  std::vector<double> losses;         ///< L_j, j = 1..n
  std::vector<double> buffer_levels;  ///< B_j, j = 1..n
  /// The band solution violated L_j <= S_j and the lattice solver was used instead.
  bool used_fallback = false;
  /// Terminal accumulated loss chosen by the endpoint search.
  double total_loss = 0.0;
};

/// Increasing convex penalty on [0, 1].
class PenaltyFunction {
 public:
  /// Checks on a 1001-point probe grid that phi is finite, nondecreasing and
  /// midpoint convex (tolerance 1e-10); throws InputError otherwise.
  PenaltyFunction(std::string name, std::function<double(double)> phi);

  static PenaltyFunction quadratic();      ///< u^2
  static PenaltyFunction exponential();    ///< e^u - 1
  static PenaltyFunction hinge_squared();  ///< max(0, 2u - 1)^2
  static PenaltyFunction polynomial(std::vector<double> coeffs);
  /// "quad", "exp", "hinge" or "poly:a0,a1,...".
  static PenaltyFunction parse(const std::string& spec);

  double operator()(double u) const { return phi_(u); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(double)> phi_;
};

/// Tube in operational time u_k = S_1 + ... + S_k for the accumulated loss:
/// upper_k = sum (S_j - C_j), lower_k = max(0, upper_k - B), start 0, free end
/// in [lower_n, upper_n].
Tube loss_band(const TrafficTrace& trace, double buffer);

/// Taut-string schedule. The terminal loss is chosen by golden-section search
/// on the penalty F itself; for a fixed terminal loss the string minimizes F
/// for every convex phi simultaneously.
LossSchedule optimal_losses(const TrafficTrace& trace, double buffer, const PenaltyFunction& phi);

/// Taut-string schedule with the accumulated loss pinned to `total_loss` at the end.
LossSchedule optimal_losses_with_end(const TrafficTrace& trace, double buffer, double total_loss);

/// Greedy schedule keeping the buffer as full as possible.
LossSchedule fifo_losses(const TrafficTrace& trace, double buffer);

/// F = sum_j phi(L_j / S_j) S_j. Throws InputError if some L_j / S_j leaves [0, 1].
double penalty(const LossSchedule& schedule, const TrafficTrace& trace, const PenaltyFunction& phi);

/// Exhaustive dynamic programming over `levels` + 1 equally spaced accumulated
/// loss values per slot spanning the band. Exact on the lattice.
LossSchedule dp_losses(const TrafficTrace& trace, double buffer, const PenaltyFunction& phi,
                       std::size_t levels = 200);

/// Recomputes the buffer levels from the losses and checks balance, 0 <= B_j <= B,
/// and 0 <= L_j <= S_j (tolerance 1e-9 relative to total inflow). Throws InvariantError.
void check_schedule(const LossSchedule& schedule, const TrafficTrace& trace, double buffer);

}  // namespace tautband
