#include "tautband/buffer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "tautband/errors.hpp"
#include "tautband/numeric.hpp"

namespace tautband {

void TrafficTrace::validate() const {
  if (inflow.empty()) throw InputError("traffic trace is empty");
  if (inflow.size() != capacity.size()) throw InputError("inflow and capacity lengths differ");
  for (std::size_t j = 0; j < inflow.size(); ++j) {
    const std::string slot = "slot " + std::to_string(j + 1);
    if (!(inflow[j] > 0.0) || !std::isfinite(inflow[j])) throw InputError(slot + ": inflow S must be positive");
    if (!(capacity[j] >= 0.0) || !std::isfinite(capacity[j])) {
      throw InputError(slot + ": capacity C must be nonnegative");
    }
    if (capacity[j] > inflow[j]) throw InputError(slot + ": capacity C exceeds inflow S");
  }
}

PenaltyFunction::PenaltyFunction(std::string name, std::function<double(double)> phi)
    : name_(std::move(name)), phi_(std::move(phi)) {
  if (!phi_) throw InputError("penalty '" + name_ + "' has no evaluator");
  constexpr std::size_t kProbes = 1001;
  std::vector<double> v(kProbes);
  for (std::size_t i = 0; i < kProbes; ++i) {
    v[i] = phi_(static_cast<double>(i) / static_cast<double>(kProbes - 1));
    if (!std::isfinite(v[i])) throw InputError("penalty '" + name_ + "' is not finite on [0, 1]");
  }
  for (std::size_t i = 1; i < kProbes; ++i) {
    if (v[i] < v[i - 1] - 1e-10) throw InputError("penalty '" + name_ + "' is not increasing");
    if (i + 1 < kProbes && v[i] > 0.5 * (v[i - 1] + v[i + 1]) + 1e-10) {
      throw InputError("penalty '" + name_ + "' is not convex");
    }
  }
}

PenaltyFunction PenaltyFunction::quadratic() {
  return {"quad", [](double u) { return u * u; }};
}

PenaltyFunction PenaltyFunction::exponential() {
  return {"exp", [](double u) { return std::expm1(u); }};
}

PenaltyFunction PenaltyFunction::hinge_squared() {
  return {"hinge", [](double u) {
            const double a = std::max(0.0, 2.0 * u - 1.0);
            return a * a;
          }};
}

PenaltyFunction PenaltyFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw InputError("polynomial penalty needs at least one coefficient");
  std::string name = "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name += (i ? "," : "") + std::to_string(coeffs[i]);
  return {name, [c = std::move(coeffs)](double u) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
            return acc;
          }};
}

PenaltyFunction PenaltyFunction::parse(const std::string& spec) {
  if (spec == "quad") return quadratic();
  if (spec == "exp") return exponential();
  if (spec == "hinge") return hinge_squared();
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::string_view rest(spec);
    rest.remove_prefix(5);
    while (true) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      double c = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), c);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError("cannot parse polynomial coefficient '" + std::string(field) + "'");
      }
      coeffs.push_back(c);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return polynomial(std::move(coeffs));
  }
  throw InputError("unknown penalty '" + spec + "' (expected quad, exp, hinge or poly:a0,a1,...)");
}

Tube loss_band(const TrafficTrace& trace, double buffer) {
  trace.validate();
  if (!(buffer >= 0.0) || !std::isfinite(buffer)) throw InputError("buffer size B must be >= 0");
  const std::size_t n = trace.size();
  std::vector<double> t(n + 1, 0.0);
  std::vector<double> lower(n + 1, 0.0);
  std::vector<double> upper(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    t[k] = t[k - 1] + trace.inflow[k - 1];
    upper[k] = upper[k - 1] + (trace.inflow[k - 1] - trace.capacity[k - 1]);
    lower[k] = std::max(0.0, upper[k] - buffer);
  }
  const Interval end{lower[n], upper[n]};
  return Tube(TimeGrid(std::move(t)), std::move(lower), std::move(upper), 0.0, end);
}

namespace {

double total_inflow(const TrafficTrace& trace) {
  return std::accumulate(trace.inflow.begin(), trace.inflow.end(), 0.0);
}

// Losses and buffer levels from an accumulated-loss path; round-off negatives
// of L are zeroed before the buffer recursion.
LossSchedule from_accumulated(const TrafficTrace& trace, std::span<const double> acc) {
  const std::size_t n = trace.size();
  const double tol = 1e-12 * (1.0 + total_inflow(trace));
  LossSchedule s;
  s.losses.resize(n);
  s.buffer_levels.resize(n);
  double level = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double l = acc[j + 1] - acc[j];
    if (l < -tol) throw InvariantError("accumulated loss decreases in slot " + std::to_string(j + 1));
    l = std::max(l, 0.0);
    s.losses[j] = l;
    level = level + (trace.inflow[j] - trace.capacity[j] - l);
    s.buffer_levels[j] = level;
  }
  s.total_loss = acc[n];
  return s;
}

bool exceeds_inflow(const LossSchedule& s, const TrafficTrace& trace) {
  for (std::size_t j = 0; j < trace.size(); ++j) {
    if (s.losses[j] > trace.inflow[j] * (1.0 + 1e-12)) return true;
  }
  return false;
}

}  // namespace

LossSchedule optimal_losses_with_end(const TrafficTrace& trace, double buffer, double total_loss) {
  const Tube band = loss_band(trace, buffer).with_end(FixedAt{total_loss});
  const TautStringResult r = solve(band);
  return from_accumulated(trace, r.path.values());
}

LossSchedule optimal_losses(const TrafficTrace& trace, double buffer, const PenaltyFunction& phi) {
  const Tube band = loss_band(trace, buffer);
  const Interval range = band.end_range();
  auto cost = [&](double end) {
    const LossSchedule s = from_accumulated(trace, solve(band.with_end(FixedAt{end})).path.values());
    double f = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) {
      f += phi(std::min(1.0, s.losses[j] / trace.inflow[j])) * trace.inflow[j];
    }
    return f;
  };
  const double tol = 1e-10 * std::max(1.0, range.hi);
  const Minimum best = golden_section_minimize(cost, range.lo, range.hi, tol);
  LossSchedule s = optimal_losses_with_end(trace, buffer, best.x);
  if (exceeds_inflow(s, trace)) {
    s = dp_losses(trace, buffer, phi);
    s.used_fallback = true;
  }
  check_schedule(s, trace, buffer);
  return s;
}

LossSchedule fifo_losses(const TrafficTrace& trace, double buffer) {
  trace.validate();
  if (!(buffer >= 0.0)) throw InputError("buffer size B must be >= 0");
  const std::size_t n = trace.size();
  LossSchedule s;
  s.losses.resize(n);
  s.buffer_levels.resize(n);
  double level = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double excess = trace.inflow[j] - trace.capacity[j];
    const double l = std::max(0.0, excess - (buffer - level));
    s.losses[j] = l;
    level = level + (excess - l);
    s.buffer_levels[j] = level;
    s.total_loss += l;
  }
  return s;
}

double penalty(const LossSchedule& schedule, const TrafficTrace& trace, const PenaltyFunction& phi) {
  if (schedule.losses.size() != trace.size()) throw InputError("schedule and trace lengths differ");
  double f = 0.0;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const double u = schedule.losses[j] / trace.inflow[j];
    if (u < 0.0 || u > 1.0 + 1e-12) {
      throw InputError("loss ratio L/S = " + std::to_string(u) + " outside [0, 1] in slot " + std::to_string(j + 1));
    }
    f += phi(std::min(u, 1.0)) * trace.inflow[j];
  }
  return f;
}

LossSchedule dp_losses(const TrafficTrace& trace, double buffer, const PenaltyFunction& phi, std::size_t levels) {
  const Tube band = loss_band(trace, buffer);
  const std::size_t n = trace.size();
  const auto& lower = band.lower();
  const auto& upper = band.upper();
  const double inf = std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * (1.0 + total_inflow(trace));

  auto state_count = [&](std::size_t k) { return upper[k] > lower[k] ? levels + 1 : std::size_t{1}; };
  auto state_value = [&](std::size_t k, std::size_t m) {
    if (state_count(k) == 1) return lower[k];
    return lower[k] + (upper[k] - lower[k]) * static_cast<double>(m) / static_cast<double>(levels);
  };

  std::vector<std::vector<double>> cost(n + 1);
  std::vector<std::vector<std::size_t>> parent(n + 1);
  cost[0].assign(1, 0.0);
  parent[0].assign(1, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double s = trace.inflow[k - 1];
    const std::size_t here = state_count(k);
    cost[k].assign(here, inf);
    parent[k].assign(here, 0);
    for (std::size_t b = 0; b < here; ++b) {
      const double vb = state_value(k, b);
      for (std::size_t a = 0; a < cost[k - 1].size(); ++a) {
        if (cost[k - 1][a] == inf) continue;
        const double l = vb - state_value(k - 1, a);
        if (l < -tol || l > s + tol) continue;
        const double c = cost[k - 1][a] + phi(std::clamp(l / s, 0.0, 1.0)) * s;
        if (c < cost[k][b]) {
          cost[k][b] = c;
          parent[k][b] = a;
        }
      }
    }
  }
  const auto last = std::min_element(cost[n].begin(), cost[n].end());
  if (*last == inf) throw InfeasibleError(n, "no lattice schedule satisfies the band and L <= S");
  std::vector<double> acc(n + 1);
  std::size_t m = static_cast<std::size_t>(last - cost[n].begin());
  for (std::size_t k = n; k >= 1; --k) {
    acc[k] = state_value(k, m);
    m = parent[k][m];
  }
  acc[0] = 0.0;
  return from_accumulated(trace, acc);
}

void check_schedule(const LossSchedule& schedule, const TrafficTrace& trace, double buffer) {
  const std::size_t n = trace.size();
  if (schedule.losses.size() != n || schedule.buffer_levels.size() != n) {
    throw InvariantError("schedule length does not match the trace");
  }
  const double tol = 1e-9 * (1.0 + total_inflow(trace));
  double level = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::string slot = " in slot " + std::to_string(j + 1);
    const double l = schedule.losses[j];
    if (l < 0.0 || l > trace.inflow[j] + tol) throw InvariantError("loss outside [0, S]" + slot);
    level = level + (trace.inflow[j] - trace.capacity[j] - l);
    if (std::abs(level - schedule.buffer_levels[j]) > tol) throw InvariantError("buffer balance broken" + slot);
    if (level < -tol || level > buffer + tol) throw InvariantError("buffer level outside [0, B]" + slot);
  }
}

}  // namespace tautband
