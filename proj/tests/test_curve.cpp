#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ectstab/curve.hpp"

using namespace ectstab;

constexpr double pi = std::numbers::pi;

TEST(FourierCurve, Circle) {
  const auto c = preset_curve("circle");
  EXPECT_NEAR(curve_length(c), 2 * pi, 1e-12);
  EXPECT_NEAR(curve_curvature_bound(c), 1.0, 1e-12);
  const auto p = c(pi / 2);
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
}

TEST(FourierCurve, ScaledCircle) {
  const FourierCurve c({{1, {2.5, 0.0}}});
  EXPECT_NEAR(curve_length(c), 5 * pi, 1e-11);
  EXPECT_NEAR(curve_curvature_bound(c), 0.4, 1e-12);
}

TEST(FourierCurve, Ellipse) {
  const auto c = preset_curve("ellipse");
  // oracle: trapezoid rule, spectrally accurate for a periodic integrand
  double trap = 0.0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    const double t = 2 * pi * i / N;
    trap += std::hypot(2 * std::sin(t), std::cos(t)) * 2 * pi / N;
  }
  EXPECT_NEAR(curve_length(c), trap, 1e-9 * trap);
  EXPECT_NEAR(curve_length(c), 9.68845, 1e-5);
  EXPECT_NEAR(curve_curvature_bound(c), 2.0, 1e-10);
  const auto p = c(0.0);
  EXPECT_NEAR(p[0], 2.0, 1e-15);
}

TEST(FourierCurve, BlobIsSimpleAndConcave) {
  const auto c = preset_curve("blob");
  EXPECT_TRUE(is_simple(c));
  // signed curvature changes sign somewhere
  bool pos = false, neg = false;
  for (int i = 0; i < 4096; ++i) {
    const double t = 2 * pi * i / 4096;
    const auto d1 = c.derivative(t, 1), d2 = c.derivative(t, 2);
    const double cross = d1.real() * d2.imag() - d1.imag() * d2.real();
    (cross > 0 ? pos : neg) = true;
  }
  EXPECT_TRUE(pos && neg);
  double r = 0.0;
  for (int i = 0; i < 4096; ++i) r = std::max(r, std::hypot(c(2 * pi * i / 4096)[0], c(2 * pi * i / 4096)[1]));
  EXPECT_LT(r, 2.0);
}

TEST(FourierCurve, FigureEightIsNotSimple) {
  // (sin t, sin 2t / 2)
  const FourierCurve eight({{1, {0.0, -0.5}}, {-1, {0.0, 0.5}}, {2, {0.25, 0.0}}, {-2, {-0.25, 0.0}}});
  // odd sample count keeps the crossing off the sample points
  EXPECT_FALSE(is_simple(eight, 2047));
  EXPECT_THROW(preset_curve("nope"), Error);
}

TEST(FourierCurve, DegenerateCurve) {
  const FourierCurve point({{0, {1.0, 0.0}}});
  EXPECT_THROW(curve_length(point), Error);
}

TEST(ArcLength, NonUniformCircle) {
  // circle traversed as t + 0.3 sin t: speed 1 + 0.3 cos t
  auto speed = [](double t) { return 1 + 0.3 * std::cos(t); };
  const ArcLengthTable table(speed, 2 * pi, 2048);
  EXPECT_NEAR(table.length(), 2 * pi, 1e-10);
  const int m = 400;
  const auto params = constant_speed_params(table, m);
  auto phi = [](double t) { return t + 0.3 * std::sin(t); };
  double lo = 1e9, hi = 0;
  for (int k = 0; k < m; ++k) {
    const double t0 = phi(params[static_cast<std::size_t>(k)]);
    const double t1 = phi(k + 1 < m ? params[static_cast<std::size_t>(k) + 1] : 2 * pi);
    const double chord = 2 * std::sin((t1 - t0) / 2);
    lo = std::min(lo, chord);
    hi = std::max(hi, chord);
  }
  EXPECT_LT((hi - lo) / lo, 0.01);
  // inverse really inverts
  for (double u : {0.1, 0.37, 0.9}) EXPECT_NEAR(table.arc(table.inverse(u)) / table.length(), u, 1e-12);
}

TEST(ArcLength, ConstantSpeedIsIdentity) {
  const ArcLengthTable table([](double) { return 1.0; }, 2 * pi, 512);
  double shift = 0.0;
  for (int k = 0; k < 100; ++k) shift = std::max(shift, std::abs(table.inverse(k / 100.0) - 2 * pi * k / 100.0));
  EXPECT_LT(shift, 1e-6);
}

TEST(ArcLength, VanishingSpeed) {
  EXPECT_THROW(ArcLengthTable([](double t) { return std::abs(std::sin(t)); }, 2 * pi, 512), Error);
}

TEST(Discretize, ConstantSpeedEllipse) {
  const auto c = preset_curve("ellipse");
  const auto s = discretize_constant_speed(c, 1000);
  const auto line = s.embedding.polyline(s.complex.edges[0]);
  double lo = 1e9, hi = 0;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    lo = std::min(lo, distance(line[k], line[k + 1]));
    hi = std::max(hi, distance(line[k], line[k + 1]));
  }
  EXPECT_LT((hi - lo) / lo, 1e-3);
  EXPECT_NEAR(polyline_length(line), curve_length(c), 1e-4);
}
