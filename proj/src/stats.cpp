#include "tautband/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tautband/errors.hpp"

namespace tautband {

Histogram::Histogram(double lo_, double hi_, std::size_t bins) : lo(lo_), hi(hi_), counts(bins, 0) {
  if (!(hi > lo) || bins == 0) {
    throw InputError("histogram needs hi > lo and at least one bin");
  }
}

void Histogram::add(double x) {
  if (x < lo) {
    ++underflow;
  } else if (x > hi) {
    ++overflow;
  } else {
    auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(counts.size()));
    ++counts[std::min(k, counts.size() - 1)];
  }
}

void Histogram::merge(const Histogram& other) {
  if (other.lo != lo || other.hi != hi || other.counts.size() != counts.size()) {
    throw InvariantError("merging histograms with different binning");
  }
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
  underflow += other.underflow;
  overflow += other.overflow;
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = underflow + overflow;
  for (auto c : counts) t += c;
  return t;
}

double Histogram::edge(std::size_t k) const {
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(counts.size());
}

void MomentAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double MomentAccumulator::variance() const {
  return n_ == 0 ? 0.0 : m2_ / static_cast<double>(n_);
}

double MomentAccumulator::second_moment() const { return variance() + mean_ * mean_; }

double MomentAccumulator::standard_error() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  return std::sqrt(m2_ / (n - 1.0) / n);
}

double median(std::span<const double> values) {
  if (values.empty()) throw InputError("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace tautband
