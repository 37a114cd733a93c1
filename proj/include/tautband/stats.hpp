#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tautband {

/// Equal-width bins on [lo, hi), closed on the left; the last bin also takes hi.
/// Values outside the range are counted in `underflow` / `overflow`.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  Histogram() = default;
  Histogram(double lo, double hi, std::size_t bins);

  void add(double x);
  void merge(const Histogram& other);
  std::uint64_t total() const;
  std::size_t bins() const { return counts.size(); }
  double edge(std::size_t k) const;
};

/// Running mean and second central moment (Welford), mergeable (Chan et al.).
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Plug-in variance (divisor n), so that second_moment() == variance() + mean()^2.
  double variance() const;
  double second_moment() const;
  /// sqrt(s^2 / n) with the unbiased s^2.
  double standard_error() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double median(std::span<const double> values);

}  // namespace tautband
