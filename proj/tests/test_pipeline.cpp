#include <cmath>
#include <memory>
#include <numbers>

#include <gtest/gtest.h>

#include "ectstab/bounds.hpp"
#include "ectstab/pipeline.hpp"

using namespace ectstab;

namespace {

constexpr double pi = std::numbers::pi;

KernelPtr sse() { return std::make_shared<SineSquaredExpKernel>(); }

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.curve = "ellipse";
  cfg.a = 2.5;
  cfg.ns = {10, 30};
  cfg.seeds = {0, 1, 2};
  cfg.directions = 16;
  cfg.m_points = 128;
  cfg.posterior_samples = 3;
  cfg.reference_points = 1024;
  cfg.table_grid = 512;
  return cfg;
}

}  // namespace

TEST(SampleNoisy, ExactWithoutNoise) {
  const auto c = preset_curve("blob");
  const auto s = sample_noisy(c, 7, 0.0, 1u);
  ASSERT_EQ(s.size(), 7u);
  for (const auto& x : s) EXPECT_EQ(x.point, c(x.param));
  EXPECT_DOUBLE_EQ(s[3].param, 2 * pi * 3 / 7);
  EXPECT_THROW(sample_noisy(c, 2, 0.1, 1u), Error);
  EXPECT_THROW(sample_noisy(c, 5, -0.1, 1u), Error);
}

TEST(SampleNoisy, DeterministicAndCalibrated) {
  const auto c = preset_curve("circle");
  const auto a = sample_noisy(c, 5000, 0.3, 17u), b = sample_noisy(c, 5000, 0.3, 17u);
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].point, b[i].point);
    const auto t = c(a[i].param);
    for (int j = 0; j < 2; ++j) ss += std::pow(a[i].point[static_cast<std::size_t>(j)] - t[static_cast<std::size_t>(j)], 2);
  }
  const double var = ss / (2.0 * a.size());
  EXPECT_NEAR(var, 0.09, 0.05 * 0.09);
}

TEST(Smooth, NearInterpolationInTheKernelSpan) {
  const auto c = preset_curve("blob");
  const auto s = sample_noisy(c, 40, 0.0, 0u);
  const auto sc = smooth(s, sse(), 1e-10);
  for (const auto& x : s) EXPECT_LT(distance(sc(x.param), x.point), 1e-4);
}

TEST(Smooth, ConstantCurveIsShrunk) {
  std::vector<NoisySample> s;
  for (int i = 0; i < 10; ++i) s.push_back({2 * pi * i / 10, {0.5, 0.0}});
  const auto sc = smooth(s, sse(), 1.0);
  const auto p = sc(1.0);
  EXPECT_GT(p[0], 0.0);
  EXPECT_LT(p[0], 0.5);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
  EXPECT_THROW(reparameterize(sc), Error);
}

TEST(Smooth, BeatsRawSamplesOnMostSeeds) {
  const auto c = preset_curve("blob");
  const double sigma = 0.002;
  int wins = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const auto s = sample_noisy(c, 20, sigma, static_cast<std::uint64_t>(seed));
    const auto sc = smooth(s, sse(), sigma * sigma);
    // both gaps at the sample parameters
    double raw = 0.0, fit = 0.0;
    for (const auto& x : s) {
      raw = std::max(raw, distance(x.point, c(x.param)));
      fit = std::max(fit, distance(sc(x.param), c(x.param)));
    }
    if (fit < raw) ++wins;
  }
  EXPECT_GE(wins, 45);
}

TEST(Reparameterize, ConstantSpeedAndLength) {
  const auto c = preset_curve("blob");
  const auto sc = reparameterize(smooth(sample_noisy(c, 50, 0.002, 3u), sse(), 4e-6), 2048);
  const auto shape = discretize(sc, 512);
  const auto line = shape.embedding.polyline(shape.complex.edges[0]);
  double lo = 1e9, hi = 0;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    lo = std::min(lo, distance(line[k], line[k + 1]));
    hi = std::max(hi, distance(line[k], line[k + 1]));
  }
  EXPECT_LT((hi - lo) / hi, 0.01);
  const auto fine = reparameterize(smooth(sample_noisy(c, 50, 0.002, 3u), sse(), 4e-6), 8192);
  EXPECT_NEAR(sc.table().length(), fine.table().length(), 1e-8 * fine.table().length());
  EXPECT_NEAR(sc.table().length(), curve_length(c), 0.01);
}

TEST(Reparameterize, CircleIsNearIdentity) {
  const auto c = preset_curve("circle");
  const auto sc = reparameterize(smooth(sample_noisy(c, 64, 0.0, 0u), sse(), 1e-10), 2048);
  double shift = 0.0;
  for (int k = 0; k < 64; ++k) shift = std::max(shift, std::abs(sc.table().inverse(k / 64.0) - 2 * pi * k / 64.0));
  EXPECT_LT(shift, 1e-6);
}

TEST(EstimateEct, CirclePattern) {
  const auto c = preset_curve("circle");
  const auto sc = reparameterize(smooth(sample_noisy(c, 64, 0.0, 0u), sse(), 1e-10));
  const auto f = estimate_ect(sc, 256, make_directions(2, 8), 2.0);
  for (const auto& e : f.curves) {
    ASSERT_EQ(e.values(), (std::vector<std::int64_t>{0, 1, 0}));
    EXPECT_NEAR(e.breaks()[0], -1.0, 1e-3);
    EXPECT_NEAR(e.breaks()[1], 1.0, 1e-3);
  }
  EXPECT_THROW(estimate_ect(sc, 256, make_directions(2, 8), 0.5), Error);
  EXPECT_THROW(estimate_ect(sc, 2, make_directions(2, 8), 2.0), Error);
}

TEST(EstimateEct, RefinementConverges) {
  const auto c = preset_curve("blob");
  const auto sc = reparameterize(smooth(sample_noisy(c, 50, 0.002, 1u), sse(), 4e-6));
  const auto d = make_directions(2, 32);
  double prev = 1e9;
  auto f = estimate_ect(sc, 64, d, 2.0);
  for (int m : {128, 256, 512}) {
    const auto g = estimate_ect(sc, m, d, 2.0);
    const double dist = ect_distance(f, g);
    EXPECT_LT(dist, prev);
    prev = dist;
    f = g;
  }
}

TEST(EstimateEct, NoiselessMatchesSamplingBound) {
  const auto c = preset_curve("ellipse");
  const auto sc = reparameterize(smooth(sample_noisy(c, 200, 0.0, 0u), sse(), 1e-10));
  const auto d = make_directions(2, 64);
  const auto est = discretize(sc, 512);
  const auto ref = discretize_constant_speed(c, 4096);
  const double dist = ect_distance(ect_field(est, d, 2.5), ect_field(ref, d, 2.5));
  const double M = curve_curvature_bound(c), L = curve_length(c);
  const double bound = interpolation_bound(M, L, epsilon_density(est.complex, est.embedding)) +
                       interpolation_bound(M, L, epsilon_density(ref.complex, ref.embedding));
  EXPECT_LE(dist, bound);
}

TEST(Experiment, DeterministicAcrossThreads) {
  const auto cfg = small_config();
  const auto a = run_consistency_experiment(cfg, 1);
  const auto b = run_consistency_experiment(cfg, 4);
  ASSERT_EQ(a.rows.size(), 2u * 3u * 4u);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].kind, b.rows[i].kind);
    EXPECT_EQ(a.rows[i].ect_dist, b.rows[i].ect_dist);
    EXPECT_EQ(a.rows[i].sect_dist, b.rows[i].sect_dist);
    EXPECT_EQ(a.rows[i].sup_gap, b.rows[i].sup_gap);
  }
  EXPECT_EQ(a.rows[0].kind, "estimate");
  EXPECT_EQ(a.rows[1].kind, "posterior_0");
  EXPECT_FALSE(a.any_failed);
}

TEST(Experiment, SectWithinEctRelation) {
  auto cfg = small_config();
  cfg.a = 2.5;
  const auto r = run_consistency_experiment(cfg, 2);
  for (const auto& row : r.rows) EXPECT_LE(row.sect_dist, (2 * cfg.a + 1) * row.ect_dist + 1e-9);
}

TEST(Experiment, FailedRunsAreMarked) {
  auto cfg = small_config();
  cfg.ns = {2, 10};
  const auto r = run_consistency_experiment(cfg, 2);
  EXPECT_TRUE(r.any_failed);
  EXPECT_EQ(r.rows.front().kind, "failed");
  EXPECT_FALSE(r.rows.front().error.empty());
  EXPECT_EQ(r.summary[0].failed, 3);
  EXPECT_EQ(r.summary[1].failed, 0);
}
