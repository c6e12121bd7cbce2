#pragma once

/// @file
/// Closed-form stability and approximation bounds for ECTs of embedded
/// one-dimensional complexes, and an upper-bound evaluator for the
/// arc-length-aware distance between two embeddings of the same complex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "ectstab/complex.hpp"
#include "ectstab/error.hpp"

namespace ectstab {

namespace detail {

/// Ceiling that treats arguments within 1e-12 of an integer as that integer.
inline long snapped_ceil(long double x) {
  const long double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12L * std::max(1.0L, std::abs(x))) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(x));
}

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::validation, std::string(what) + " must be positive");
}

}  // namespace detail

/// Number of pieces a cell of length L and curvature <= M is cut into:
/// max(ceil((M^2 L^3 / 24 eps)^(1/3)), ceil(L M / pi)), at least 1.
inline long n_lambda(double M, double L, double eps) {
  detail::require_positive(M, "curvature bound M");
  detail::require_positive(L, "arc length L");
  detail::require_positive(eps, "eps");
  const long double m = M, l = L, e = eps;
  const long a = detail::snapped_ceil(std::cbrt(m * m * l * l * l / (24.0L * e)));
  const long b = detail::snapped_ceil(l * m / std::numbers::pi_v<long double>);
  return std::max({a, b, 1L});
}

/// Per-cell term of the stability bound.
inline double g_lambda(double M, double L, double eps) {
  const long n = n_lambda(M, L, eps);
  const double nd = static_cast<double>(n);
  if (L / nd > 2.0 * eps) return 8.0 * std::sqrt(L * nd * eps) + nd * eps;
  return 11.0 * nd * eps;
}

struct StabilityInput {
  std::vector<double> lengths;  ///< arc length of every 1-cell
  double curvature = 0.0;       ///< M
  long vertex_count = 0;        ///< |Z_0|
  double eps = 0.0;
};

struct BoundReport {
  std::vector<long> n;
  std::vector<double> g;
  double total = 0.0;
};

/// |Z_0| eps + sum over cells of G_lambda(eps).
inline BoundReport stability_bound(const StabilityInput& in) {
  require(in.vertex_count >= 0, "vertex count must be non-negative");
  detail::require_positive(in.eps, "eps");
  BoundReport r;
  r.total = static_cast<double>(in.vertex_count) * in.eps;
  for (double L : in.lengths) {
    r.n.push_back(n_lambda(in.curvature, L, in.eps));
    r.g.push_back(g_lambda(in.curvature, L, in.eps));
    r.total += r.g.back();
  }
  return r;
}

/// Bound on the ECT distance of two nearly straight curves: 8 sqrt(L eps) when
/// L > 2 eps, else 10 eps.
inline double local_ect_bound(double L, double eps) {
  require(L >= 0.0, "local_ect_bound: L must be non-negative");
  detail::require_positive(eps, "eps");
  return L > 2.0 * eps ? 8.0 * std::sqrt(L * eps) : 10.0 * eps;
}

/// The angle-dependent quantity whose maximum over theta is capped by
/// local_ect_bound(L, eps).
inline double local_ect_profile(double L, double eps, double theta) {
  const double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
  const double m = std::max(0.0, L * c - 2.0 * eps);
  return std::sqrt((L + 2.0 * eps) * (L + 2.0 * eps) - m * m) +
         std::sqrt(std::max(0.0, (L + eps) * (L + eps) - L * L * c * c)) -
         2.0 * std::max(0.0, L * s - 2.0 * eps) + std::max(0.0, eps - L * s);
}

/// Smallest possible chord across arc length eps of a curve with curvature <= M.
inline double chord_lower_bound(double M, double eps) {
  detail::require_positive(M, "curvature bound M");
  detail::require_positive(eps, "eps");
  if (eps >= std::numbers::pi / M) fail(ErrorKind::validation, "chord_lower_bound: eps must be below pi / M");
  return 2.0 / M * std::sin(M * eps / 2.0);
}

/// Cubic relaxation of chord_lower_bound: eps - M^2 eps^3 / 24.
inline double chord_cubic_lower_bound(double M, double eps) {
  detail::require_positive(M, "curvature bound M");
  detail::require_positive(eps, "eps");
  if (eps >= std::numbers::pi / M) fail(ErrorKind::validation, "chord_cubic_lower_bound: eps must be below pi / M");
  return eps - M * M * eps * eps * eps / 24.0;
}

/// Variation of a transverse coordinate of a path of length L whose first
/// coordinate advances by Lx.
inline double coord_variation_bound(double L, double Lx) {
  require(Lx >= 0.0 && L >= 0.0, "coord_variation_bound: lengths must be non-negative");
  if (Lx > L) fail(ErrorKind::validation, "coord_variation_bound: Lx exceeds L");
  return std::sqrt((L - Lx) * (L + Lx));
}

/// Error of the ECT interpolated from an eps-dense sample: M L eps / sqrt(12).
inline double interpolation_bound(double M, double L_total, double eps) {
  require(M >= 0.0, "interpolation_bound: M must be non-negative");
  detail::require_positive(L_total, "total length");
  detail::require_positive(eps, "eps");
  if (M > 0.0 && eps >= std::numbers::pi / M) fail(ErrorKind::validation, "interpolation_bound: eps must be below pi / M");
  return M * L_total * eps / std::sqrt(12.0);
}

/// Upper bound L f(eps) / eps on sum f(x_i) over parts x_i <= eps summing to L,
/// for convex increasing f with f(0) = 0.
inline double convexity_cap(double L, double eps, double f_at_eps) {
  detail::require_positive(L, "L");
  detail::require_positive(eps, "eps");
  require(f_at_eps >= 0.0, "convexity_cap: f(eps) must be non-negative");
  return L * f_at_eps / eps;
}

// ---------------------------------------------------------------------------
// Distance between embeddings

namespace detail {

/// A polyline parameterized proportionally to arc length on [0, 1].
class ConstantSpeedPolyline {
 public:
  explicit ConstantSpeedPolyline(std::vector<Point> pts) : pts_(std::move(pts)), frac_(pts_.size(), 0.0) {
    for (std::size_t k = 1; k < pts_.size(); ++k) frac_[k] = frac_[k - 1] + distance(pts_[k - 1], pts_[k]);
    length_ = frac_.back();
    for (auto& f : frac_) f /= length_;
    frac_.back() = 1.0;
  }

  double length() const { return length_; }
  const std::vector<double>& knots() const { return frac_; }

  Point at(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    auto it = std::upper_bound(frac_.begin(), frac_.end(), s);
    std::size_t k = it == frac_.end() ? frac_.size() - 1 : static_cast<std::size_t>(it - frac_.begin());
    if (k == 0) k = 1;
    const double span = frac_[k] - frac_[k - 1];
    const double w = span > 0.0 ? (s - frac_[k - 1]) / span : 0.0;
    Point p(pts_[k].size());
    for (std::size_t c = 0; c < p.size(); ++c) p[c] = (1.0 - w) * pts_[k - 1][c] + w * pts_[k][c];
    return p;
  }

 private:
  std::vector<Point> pts_;
  std::vector<double> frac_;
  double length_ = 0.0;
};

inline double wrap01(double s) {
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

/// Exact sup over s of |x(s) - y(phi(s))| where phi(s) = shift + s (or shift - s
/// when reversed), taken mod 1 for loops. Both maps are piecewise linear in s
/// between the merged knots, so the sup is attained at a knot.
inline double sup_gap(const ConstantSpeedPolyline& x, const ConstantSpeedPolyline& y, double shift, bool reversed,
                      bool loop) {
  auto phi = [&](double s) {
    const double u = reversed ? shift - s : shift + s;
    return loop ? wrap01(u) : std::clamp(u, 0.0, 1.0);
  };
  std::vector<double> knots = x.knots();
  for (double ky : y.knots()) {
    // s with phi(s) == ky
    double s = reversed ? shift - ky : ky - shift;
    if (loop) s = wrap01(s);
    if (s >= 0.0 && s <= 1.0) knots.push_back(s);
  }
  if (loop) knots.push_back(1.0);
  double best = 0.0;
  for (double s : knots) best = std::max(best, distance(x.at(s), y.at(phi(s))));
  return best;
}

}  // namespace detail

struct MetricBound {
  double value = 0.0;       ///< max(length_gap, sup_gap)
  double length_gap = 0.0;  ///< max over cells of |L_X - L_Y|
  double sup_gap = 0.0;     ///< sup norm between the chosen constant-speed parameterizations
  double shift = 0.0;       ///< cyclic shift used (single cycles with rotation search)
  bool reversed = false;
};

/// Witness eps with d(X, Y) <= eps for the arc-length-aware metric: both
/// embeddings are taken with constant-speed parameterizations of every cell.
/// With rotation_search on a single-loop complex, the start point and
/// orientation of Y's parameterization are searched on a grid of shift_grid
/// shifts, refined locally around the best one.
inline MetricBound metric_upper_bound(const CwComplex& complex, const Embedding& x, const Embedding& y,
                                      bool rotation_search = false, int shift_grid = 256) {
  require_valid(complex, x);
  require_valid(complex, y);
  if (x.dim != y.dim) fail(ErrorKind::incompatible, "metric_upper_bound: embeddings have different dimensions");
  MetricBound out;
  const bool single_loop = complex.vertices.size() == 1 && complex.edges.size() == 1 && complex.edges[0].is_loop();

  if (rotation_search && single_loop) {
    require(shift_grid >= 1, "metric_upper_bound: shift grid must be positive");
    const detail::ConstantSpeedPolyline px(x.polyline(complex.edges[0]));
    const detail::ConstantSpeedPolyline py(y.polyline(complex.edges[0]));
    out.length_gap = std::abs(px.length() - py.length());
    out.sup_gap = std::numeric_limits<double>::infinity();
    auto consider = [&](double shift, bool rev) {
      const double g = detail::sup_gap(px, py, detail::wrap01(shift), rev, true);
      if (g < out.sup_gap) {
        out.sup_gap = g;
        out.shift = detail::wrap01(shift);
        out.reversed = rev;
      }
    };
    for (bool rev : {false, true})
      for (int k = 0; k < shift_grid; ++k) consider(static_cast<double>(k) / shift_grid, rev);
    const double step = 1.0 / shift_grid;
    const double center = out.shift;
    const bool rev = out.reversed;
    constexpr int kRefine = 64;
    for (int k = -kRefine; k <= kRefine; ++k) consider(center + step * k / kRefine, rev);
  } else {
    for (const auto& e : complex.edges) {
      const detail::ConstantSpeedPolyline px(x.polyline(e));
      const detail::ConstantSpeedPolyline py(y.polyline(e));
      out.length_gap = std::max(out.length_gap, std::abs(px.length() - py.length()));
      out.sup_gap = std::max(out.sup_gap, detail::sup_gap(px, py, 0.0, false, e.is_loop()));
    }
    for (const auto& v : complex.vertices)
      out.sup_gap = std::max(out.sup_gap, distance(x.positions.at(v), y.positions.at(v)));
  }
  out.value = std::max(out.length_gap, out.sup_gap);
  return out;
}

}  // namespace ectstab
