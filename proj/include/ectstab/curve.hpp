#pragma once

/// @file
/// Closed plane curves given by finite complex Fourier series, and arc-length
/// tables for reparameterizing periodic curves to constant speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ectstab/complex.hpp"
#include "ectstab/error.hpp"

namespace ectstab {

/// gamma(t) = sum_j c_j e^{i j t}, read as (Re, Im) in R^2, t in [0, 2 pi).
class FourierCurve {
 public:
  using Coeffs = std::map<int, std::complex<double>>;

  FourierCurve() = default;
  explicit FourierCurve(Coeffs c) : c_(std::move(c)) {
    for (const auto& [j, z] : c_)
      require(std::isfinite(z.real()) && std::isfinite(z.imag()), "fourier curve: coefficients must be finite");
  }

  const Coeffs& coeffs() const { return c_; }

  /// k-th derivative as a complex number.
  std::complex<double> derivative(double t, int k) const {
    std::complex<double> s{};
    for (const auto& [j, c] : c_) {
      std::complex<double> f(1.0, 0.0);
      for (int r = 0; r < k; ++r) f *= std::complex<double>(0.0, j);
      s += c * f * std::polar(1.0, j * t);
    }
    return s;
  }

  Point operator()(double t) const {
    const auto z = derivative(t, 0);
    return {z.real(), z.imag()};
  }

  Point velocity(double t) const {
    const auto z = derivative(t, 1);
    return {z.real(), z.imag()};
  }

  double speed(double t) const { return std::abs(derivative(t, 1)); }

  /// Unsigned curvature |x'y'' - y'x''| / |gamma'|^3.
  double curvature(double t) const {
    const auto d1 = derivative(t, 1), d2 = derivative(t, 2);
    const double cross = d1.real() * d2.imag() - d1.imag() * d2.real();
    const double v = std::abs(d1);
    return std::abs(cross) / (v * v * v);
  }

 private:
  Coeffs c_;
};

/// Throws if the speed nearly vanishes on a dense grid.
inline void require_regular(const FourierCurve& c, int grid = 4096) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double v = c.speed(2.0 * std::numbers::pi * i / grid);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > 0.0) || lo <= 1e-9 * hi) fail(ErrorKind::validation, "fourier curve: degenerate, speed vanishes");
}

/// Arc length by adaptive Gauss-Kronrod quadrature of |gamma'|.
inline double curve_length(const FourierCurve& c) {
  require_regular(c);
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double t) { return c.speed(t); };
  // split into quarters so the adaptive rule sees each lobe
  double total = 0.0;
  for (int q = 0; q < 4; ++q) {
    const double a = q * std::numbers::pi / 2.0, b = (q + 1) * std::numbers::pi / 2.0;
    total += gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
  }
  return total;
}

/// Maximum curvature: 4096-point grid, then golden-section refinement around
/// the best few grid points.
inline double curve_curvature_bound(const FourierCurve& c) {
  require_regular(c);
  constexpr int grid = 4096;
  const double h = 2.0 * std::numbers::pi / grid;
  std::vector<std::pair<double, int>> ranked;
  for (int i = 0; i < grid; ++i) ranked.emplace_back(c.curvature(i * h), i);
  std::partial_sort(ranked.begin(), ranked.begin() + 8, ranked.end(), std::greater<>());
  double best = ranked.front().first;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int r = 0; r < 8; ++r) {
    double a = (ranked[static_cast<std::size_t>(r)].second - 1) * h, b = a + 2.0 * h;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = c.curvature(x1), f2 = c.curvature(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = c.curvature(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = c.curvature(x2);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

namespace detail {

inline double orient(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

inline bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace detail

/// Dense self-intersection scan of the closed polygon through `samples`
/// equally spaced parameters. Non-adjacent segments only.
inline bool is_simple(const FourierCurve& c, int samples = 2048) {
  std::vector<Point> p;
  p.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) p.push_back(c(2.0 * std::numbers::pi * i / samples));
  const auto n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (detail::segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

/// Named test curves.
inline FourierCurve preset_curve(const std::string& name) {
  using C = std::complex<double>;
  if (name == "circle") return FourierCurve({{1, C(1.0, 0.0)}});
  // (2 cos t, sin t)
  if (name == "ellipse") return FourierCurve({{1, C(1.5, 0.0)}, {-1, C(0.5, 0.0)}});
  if (name == "blob")
    return FourierCurve(
        {{0, C(0.02, 0.0)}, {1, C(1.0, 0.0)}, {-1, C(0.1, 0.0)}, {-2, C(0.3, 0.0)}, {2, C(0.0, 0.05)}});
  fail(ErrorKind::validation, "unknown curve preset '" + name + "' (known: circle, ellipse, blob)");
}

inline std::vector<std::string> preset_names() { return {"circle", "ellipse", "blob"}; }

// ---------------------------------------------------------------------------
// Arc length

/// Cumulative arc length of a periodic curve on [0, T] from its speed, by
/// Simpson's rule on each grid interval. The inverse map (arc fraction ->
/// parameter) is linear interpolation in the table polished by Newton steps.
class ArcLengthTable {
 public:
  ArcLengthTable() = default;

  ArcLengthTable(std::function<double(double)> speed, double period, int grid)
      : speed_(std::move(speed)), period_(period) {
    require(grid >= 2, "arc length table: grid must have at least 2 intervals");
    require(period > 0.0, "arc length table: period must be positive");
    const double h = period / grid;
    t_.resize(static_cast<std::size_t>(grid) + 1);
    s_.assign(t_.size(), 0.0);
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (int i = 0; i <= grid; ++i) {
      t_[static_cast<std::size_t>(i)] = i * h;
      const double v = speed_(i * h);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (!(vmax > 0.0) || !(vmin > 1e-9 * vmax))
      fail(ErrorKind::runtime, "arc length table: speed vanishes, cannot reparameterize to constant speed");
    for (int i = 0; i < grid; ++i) {
      const auto k = static_cast<std::size_t>(i);
      s_[k + 1] = s_[k] + simpson(t_[k], t_[k + 1]);
    }
    min_speed_ = vmin;
  }

  double length() const { return s_.back(); }
  double period() const { return period_; }
  double min_speed() const { return min_speed_; }

  /// Arc length from 0 to t, t in [0, T].
  double arc(double t) const {
    t = std::clamp(t, 0.0, period_);
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (k + 1 >= t_.size()) k = t_.size() - 2;
    return s_[k] + simpson(t_[k], t);
  }

  /// Parameter t with arc(t) = u * length(), u in [0, 1].
  double inverse(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    if (u == 0.0) return 0.0;
    if (u == 1.0) return period_;
    const double target = u * length();
    auto it = std::lower_bound(s_.begin(), s_.end(), target);
    std::size_t k = static_cast<std::size_t>(it - s_.begin());
    k = std::clamp<std::size_t>(k, 1, s_.size() - 1);
    const double w = (target - s_[k - 1]) / (s_[k] - s_[k - 1]);
    double t = t_[k - 1] + w * (t_[k] - t_[k - 1]);
    for (int it_n = 0; it_n < 3; ++it_n) {
      const double v = speed_(t);
      const double step = (arc(t) - target) / v;
      t = std::clamp(t - step, t_[k - 1], t_[k]);
      if (std::abs(step) < 1e-15 * period_) break;
    }
    return t;
  }

 private:
  double simpson(double a, double b) const {
    if (b <= a) return 0.0;
    return (b - a) / 6.0 * (speed_(a) + 4.0 * speed_(0.5 * (a + b)) + speed_(b));
  }

  std::function<double(double)> speed_;
  double period_ = 0.0;
  double min_speed_ = 0.0;
  std::vector<double> t_;
  std::vector<double> s_;
};

/// Parameters of n points equally spaced in arc length, starting at t = 0.
inline std::vector<double> constant_speed_params(const ArcLengthTable& table, int n) {
  require(n >= 1, "constant_speed_params: n must be positive");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = table.inverse(static_cast<double>(k) / n);
  return t;
}

/// Single-cycle shape through the curve at n constant-speed points.
inline Shape discretize_constant_speed(const FourierCurve& c, int n, int table_grid = 4096) {
  require(n >= 3, "discretize: need at least 3 points");
  const ArcLengthTable table([&c](double t) { return c.speed(t); }, 2.0 * std::numbers::pi, table_grid);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (double t : constant_speed_params(table, n)) pts.push_back(c(t));
  return make_cycle(pts);
}

}  // namespace ectstab
