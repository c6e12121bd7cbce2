#pragma once

/// @file
/// Covariance kernels on one-dimensional parameter domains, with analytic
/// partial derivatives up to the order the derivative posteriors need.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "ectstab/complex.hpp"
#include "ectstab/error.hpp"

namespace ectstab {

/// k(s, t) together with its partials. Subscript x differentiates the first
/// argument, y the second. Kernels that lack an order throw from that accessor.
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual std::string name() const = 0;
  virtual double operator()(double s, double t) const = 0;

  virtual double kx(double, double) const { missing("k_x"); }
  virtual double ky(double, double) const { missing("k_y"); }
  virtual double kxy(double, double) const { missing("k_xy"); }
  virtual double kxx(double, double) const { missing("k_xx"); }
  virtual double kyy(double, double) const { missing("k_yy"); }
  virtual double kxxyy(double, double) const { missing("k_xxyy"); }

 protected:
  [[noreturn]] void missing(const char* which) const {
    fail(ErrorKind::validation, "kernel '" + name() + "' does not provide " + which);
  }
};

using KernelPtr = std::shared_ptr<const Kernel>;

namespace detail {

/// Derivatives of g(r) = A exp(u(r)) up to order four, given u and its derivatives.
struct ExpJet {
  double g0, g1, g2, g4;

  ExpJet(double A, double u, double u1, double u2, double u3, double u4) {
    g0 = A * std::exp(u);
    g1 = g0 * u1;
    g2 = g0 * (u1 * u1 + u2);
    g4 = g0 * (u1 * u1 * u1 * u1 + 6.0 * u1 * u1 * u2 + 3.0 * u2 * u2 + 4.0 * u1 * u3 + u4);
  }
};

}  // namespace detail

/// Stationary kernel k(s, t) = g(s - t). Derived classes supply the jet of g.
class StationaryKernel : public Kernel {
 public:
  double operator()(double s, double t) const override { return jet(s - t).g0; }
  double kx(double s, double t) const override { return jet(s - t).g1; }
  double ky(double s, double t) const override { return -jet(s - t).g1; }
  double kxy(double s, double t) const override { return -jet(s - t).g2; }
  double kxx(double s, double t) const override { return jet(s - t).g2; }
  double kyy(double s, double t) const override { return jet(s - t).g2; }
  double kxxyy(double s, double t) const override { return jet(s - t).g4; }

 protected:
  virtual detail::ExpJet jet(double r) const = 0;
};

/// A exp(-c sin^2((s - t) / 2)) on the circle. The defaults A = 1, c = 2 give
/// exp(-2 sin^2((s - t) / 2)).
class SineSquaredExpKernel final : public StationaryKernel {
 public:
  explicit SineSquaredExpKernel(double amplitude2 = 1.0, double inverse_scale = 2.0)
      : amplitude2_(amplitude2), c_(inverse_scale) {
    require(amplitude2 > 0.0 && std::isfinite(amplitude2), "sine-squared kernel: amplitude must be positive");
    require(inverse_scale > 0.0 && std::isfinite(inverse_scale), "sine-squared kernel: inverse scale must be positive");
  }

  std::string name() const override { return "sine_squared_exp"; }
  double amplitude2() const { return amplitude2_; }
  double inverse_scale() const { return c_; }

 protected:
  // sin^2(r/2) = (1 - cos r) / 2
  detail::ExpJet jet(double r) const override {
    const double h = 0.5 * c_;
    const double s = std::sin(r), c = std::cos(r);
    return {amplitude2_, h * (c - 1.0), -h * s, -h * c, h * s, h * c};
  }

 private:
  double amplitude2_;
  double c_;
};

/// A exp(-(s - t)^2 / (2 l^2)), for open arcs parameterized by [0, 1].
class SquaredExpKernel final : public StationaryKernel {
 public:
  explicit SquaredExpKernel(double lengthscale = 0.2, double amplitude2 = 1.0)
      : l_(lengthscale), amplitude2_(amplitude2) {
    require(lengthscale > 0.0 && std::isfinite(lengthscale), "squared-exp kernel: lengthscale must be positive");
    require(amplitude2 > 0.0 && std::isfinite(amplitude2), "squared-exp kernel: amplitude must be positive");
  }

  std::string name() const override { return "squared_exp"; }

 protected:
  detail::ExpJet jet(double r) const override {
    const double w = 1.0 / (l_ * l_);
    return {amplitude2_, -0.5 * r * r * w, -r * w, -w, 0.0, 0.0};
  }

 private:
  double l_;
  double amplitude2_;
};

/// Value, first and second derivative of a reference map [domain] -> R^d.
struct ReferenceJet {
  Point value, d1, d2;
};

using ReferenceMap = std::function<ReferenceJet(double)>;

/// k'(s, t) = A exp(-|f(s) - f(t)|^2 / (2 l^2)) for a smooth reference map f.
/// Provides partials up to k_xy, k_xx, k_yy; k_xxyy is not implemented.
class PushforwardKernel final : public Kernel {
 public:
  PushforwardKernel(ReferenceMap f, double lengthscale = 1.0, double amplitude2 = 1.0)
      : f_(std::move(f)), l_(lengthscale), amplitude2_(amplitude2) {
    require(static_cast<bool>(f_), "pushforward kernel: reference map is empty");
    require(lengthscale > 0.0 && std::isfinite(lengthscale), "pushforward kernel: lengthscale must be positive");
    require(amplitude2 > 0.0 && std::isfinite(amplitude2), "pushforward kernel: amplitude must be positive");
  }

  std::string name() const override { return "pushforward_rbf"; }

  double operator()(double s, double t) const override { return terms(s, t).k; }
  double kx(double s, double t) const override {
    const auto q = terms(s, t);
    return q.k * q.ps;
  }
  double ky(double s, double t) const override {
    const auto q = terms(s, t);
    return q.k * q.pt;
  }
  double kxy(double s, double t) const override {
    const auto q = terms(s, t);
    return q.k * (q.ps * q.pt + q.pst);
  }
  double kxx(double s, double t) const override {
    const auto q = terms(s, t);
    return q.k * (q.ps * q.ps + q.pss);
  }
  double kyy(double s, double t) const override {
    const auto q = terms(s, t);
    return q.k * (q.pt * q.pt + q.ptt);
  }

 private:
  // k = A exp(phi), phi = -|D|^2 / (2 l^2), D = f(s) - f(t)
  struct Terms {
    double k, ps, pt, pst, pss, ptt;
  };

  Terms terms(double s, double t) const {
    const auto a = f_(s), b = f_(t);
    const double w = 1.0 / (l_ * l_);
    Point D(a.value.size());
    for (std::size_t i = 0; i < D.size(); ++i) D[i] = a.value[i] - b.value[i];
    Terms q;
    q.k = amplitude2_ * std::exp(-0.5 * dot(D, D) * w);
    q.ps = -dot(D, a.d1) * w;
    q.pt = dot(D, b.d1) * w;
    q.pst = dot(a.d1, b.d1) * w;
    q.pss = -(dot(a.d1, a.d1) + dot(D, a.d2)) * w;
    q.ptt = (-dot(b.d1, b.d1) + dot(D, b.d2)) * w;
    return q;
  }

  ReferenceMap f_;
  double l_;
  double amplitude2_;
};

/// d_k(s, t) = sqrt(k(s, s) + k(t, t) - 2 k(s, t)), clamped at 0.
inline double kernel_metric(const Kernel& k, double s, double t) {
  return std::sqrt(std::max(0.0, k(s, s) + k(t, t) - 2.0 * k(s, t)));
}

}  // namespace ectstab
