#pragma once

/// @file
/// Right-continuous step functions and continuous piecewise-linear functions of
/// one real variable, with exact L1 arithmetic on both.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ectstab/error.hpp"

namespace ectstab {

/// f(t) = values[0] for t < breaks[0], values[i] on [breaks[i-1], breaks[i]),
/// values.back() for t >= breaks.back(). Canonical: breaks strictly increasing,
/// adjacent values distinct.
template <class Value>
class BasicStepFunction {
 public:
  BasicStepFunction() : values_{Value{}} {}

  explicit BasicStepFunction(Value constant) : values_{constant} {}

  /// Builds from (position, jump) pairs in any order. Jumps at equal positions
  /// are merged; zero net jumps vanish.
  static BasicStepFunction from_jumps(std::vector<std::pair<double, Value>> jumps, Value initial = Value{}) {
    std::sort(jumps.begin(), jumps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    BasicStepFunction f(initial);
    Value current = initial;
    std::size_t i = 0;
    while (i < jumps.size()) {
      const double at = jumps[i].first;
      Value delta{};
      for (; i < jumps.size() && jumps[i].first == at; ++i) delta += jumps[i].second;
      if (delta == Value{}) continue;
      current += delta;
      f.breaks_.push_back(at);
      f.values_.push_back(current);
    }
    return f;
  }

  /// Builds from raw breakpoints and values, then canonicalizes.
  static BasicStepFunction from_pieces(std::vector<double> breaks, std::vector<Value> values) {
    require(values.size() == breaks.size() + 1, "step function: need one more value than breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
      require(breaks[i - 1] < breaks[i], "step function: breakpoints must be strictly increasing");
    BasicStepFunction f(values.front());
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      if (values[i + 1] == f.values_.back()) continue;
      f.breaks_.push_back(breaks[i]);
      f.values_.push_back(values[i + 1]);
    }
    return f;
  }

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<Value>& values() const { return values_; }
  Value initial() const { return values_.front(); }
  Value final_value() const { return values_.back(); }

  Value operator()(double t) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  bool operator==(const BasicStepFunction&) const = default;

  /// Pointwise combination over the merged breakpoints, canonicalized.
  template <class Op>
  friend BasicStepFunction combine(const BasicStepFunction& f, const BasicStepFunction& g, Op op) {
    std::vector<double> merged;
    merged.reserve(f.breaks_.size() + g.breaks_.size());
    std::merge(f.breaks_.begin(), f.breaks_.end(), g.breaks_.begin(), g.breaks_.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    std::vector<Value> values;
    values.reserve(merged.size() + 1);
    values.push_back(op(f.initial(), g.initial()));
    for (double t : merged) values.push_back(op(f(t), g(t)));
    return from_pieces(std::move(merged), std::move(values));
  }

  friend BasicStepFunction operator+(const BasicStepFunction& f, const BasicStepFunction& g) {
    return combine(f, g, [](Value a, Value b) { return a + b; });
  }
  friend BasicStepFunction operator-(const BasicStepFunction& f, const BasicStepFunction& g) {
    return combine(f, g, [](Value a, Value b) { return a - b; });
  }

  /// Exact integral of |f| over [lo, hi].
  double integral_abs(double lo, double hi) const { return integrate(lo, hi, true); }

  /// Exact signed integral of f over [lo, hi].
  double integral(double lo, double hi) const { return integrate(lo, hi, false); }

 private:
  double integrate(double lo, double hi, bool absolute) const {
    if (!(hi > lo)) return 0.0;
    double total = 0.0;
    double left = lo;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), lo);
    std::size_t piece = static_cast<std::size_t>(it - breaks_.begin());
    while (left < hi) {
      const double right = piece < breaks_.size() ? std::min(breaks_[piece], hi) : hi;
      const double v = static_cast<double>(values_[piece]);
      total += (absolute ? std::abs(v) : v) * (right - left);
      left = right;
      ++piece;
    }
    return total;
  }

  std::vector<double> breaks_;
  std::vector<Value> values_;
};

using StepFunction = BasicStepFunction<std::int64_t>;

/// Exact L1 distance between two step functions over [lo, hi].
template <class Value>
double l1_distance(const BasicStepFunction<Value>& f, const BasicStepFunction<Value>& g, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  double total = 0.0;
  double left = lo;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(f.breaks().begin(), f.breaks().end(), lo) - f.breaks().begin());
  std::size_t j = static_cast<std::size_t>(std::upper_bound(g.breaks().begin(), g.breaks().end(), lo) - g.breaks().begin());
  while (left < hi) {
    double right = hi;
    if (i < f.breaks().size()) right = std::min(right, f.breaks()[i]);
    if (j < g.breaks().size()) right = std::min(right, g.breaks()[j]);
    const double diff = static_cast<double>(f.values()[i]) - static_cast<double>(g.values()[j]);
    total += std::abs(diff) * (right - left);
    left = right;
    if (i < f.breaks().size() && f.breaks()[i] == right) ++i;
    if (j < g.breaks().size() && g.breaks()[j] == right) ++j;
  }
  return total;
}

/// Continuous piecewise-linear function on [knots.front(), knots.back()].
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {
    require(knots_.size() == values_.size() && knots_.size() >= 2,
            "piecewise-linear: need matching knots and values, at least two");
    for (std::size_t i = 1; i < knots_.size(); ++i)
      require(knots_[i - 1] < knots_[i], "piecewise-linear: knots must be strictly increasing");
  }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  double lo() const { return knots_.front(); }
  double hi() const { return knots_.back(); }

  /// Linear interpolation; constant extension outside the knot range.
  double operator()(double t) const {
    if (t <= knots_.front()) return values_.front();
    if (t >= knots_.back()) return values_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    const double w = (t - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
    return (1.0 - w) * values_[k - 1] + w * values_[k];
  }

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Exact integral of |d| over [0, w] where d is linear from d0 to d1.
inline double abs_linear_integral(double d0, double d1, double w) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) return 0.5 * (std::abs(d0) + std::abs(d1)) * w;
  const double a0 = std::abs(d0), a1 = std::abs(d1);
  return 0.5 * (a0 * a0 + a1 * a1) / (a0 + a1) * w;
}

/// Exact L1 distance over the common domain of two piecewise-linear functions
/// with the same domain.
inline double l1_distance(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  require(f.lo() == g.lo() && f.hi() == g.hi(), "piecewise-linear distance: domains differ");
  std::vector<double> merged;
  std::merge(f.knots().begin(), f.knots().end(), g.knots().begin(), g.knots().end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  double total = 0.0;
  double prev = f(merged.front()) - g(merged.front());
  for (std::size_t k = 1; k < merged.size(); ++k) {
    const double cur = f(merged[k]) - g(merged[k]);
    total += abs_linear_integral(prev, cur, merged[k] - merged[k - 1]);
    prev = cur;
  }
  return total;
}

}  // namespace ectstab
