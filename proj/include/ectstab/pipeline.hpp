#pragma once

/// @file
/// The smoothing estimator of the ECT of a closed curve seen through ambient
/// noise: sample, smooth each coordinate with a GP, reparameterize to constant
/// speed, discretize, and compare against a dense reference. Also the batch
/// experiment over sample sizes and seeds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ectstab/bounds.hpp"
#include "ectstab/complex.hpp"
#include "ectstab/curve.hpp"
#include "ectstab/ect.hpp"
#include "ectstab/error.hpp"
#include "ectstab/gp.hpp"
#include "ectstab/kernel.hpp"
#include "ectstab/parallel.hpp"

namespace ectstab {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NoisySample {
  double param = 0.0;
  Point point;
};

/// n points at parameters 2 pi i / n with i.i.d. N(0, sigma^2) noise per coordinate.
inline std::vector<NoisySample> sample_noisy(const FourierCurve& c, int n, double sigma, std::mt19937_64& rng) {
  require(n >= 3, "sample_noisy: need n >= 3");
  require(sigma >= 0.0 && std::isfinite(sigma), "sample_noisy: sigma must be non-negative");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<NoisySample> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& s = out[static_cast<std::size_t>(i)];
    s.param = kTwoPi * i / n;
    s.point = c(s.param);
    for (auto& x : s.point) x += sigma * normal(rng);
  }
  return out;
}

inline std::vector<NoisySample> sample_noisy(const FourierCurve& c, int n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_noisy(c, n, sigma, rng);
}

/// Posterior-mean curve t -> (mean_x(t), ..., mean_d(t)) on the parameter circle,
/// optionally with a constant-speed reparameterization.
class SmoothedCurve {
 public:
  explicit SmoothedCurve(GpModel model) : model_(std::move(model)) {}

  const GpModel& model() const { return model_; }
  int dim() const { return static_cast<int>(model_.outputs()); }

  Point operator()(double t) const { return to_point(model_.mean(t)); }
  Point velocity(double t) const { return to_point(model_.mean_derivative(t)); }
  double speed(double t) const { return model_.mean_derivative(t).norm(); }

  bool reparameterized() const { return table_.has_value(); }
  const ArcLengthTable& table() const {
    if (!table_) fail(ErrorKind::validation, "smoothed curve: not reparameterized");
    return *table_;
  }
  void set_table(ArcLengthTable t) { table_ = std::move(t); }

  /// Point at arc fraction u in [0, 1).
  Point at_fraction(double u) const { return (*this)(table().inverse(u)); }

  /// Parameters of m constant-speed points (u = k / m).
  std::vector<double> constant_speed_params(int m) const { return ectstab::constant_speed_params(table(), m); }

 private:
  static Point to_point(const Eigen::VectorXd& v) { return Point(v.data(), v.data() + v.size()); }

  GpModel model_;
  std::optional<ArcLengthTable> table_;
};

/// Fits one GP per coordinate (sharing one factorization).
inline SmoothedCurve smooth(const std::vector<NoisySample>& samples, KernelPtr kernel, double sigma2) {
  require(samples.size() >= 2, "smooth: need at least two samples");
  const auto d = static_cast<Eigen::Index>(samples.front().point.size());
  std::vector<double> params;
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(samples.size()), d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(static_cast<Eigen::Index>(samples[i].point.size()) == d, "smooth: samples have mixed dimensions");
    params.push_back(samples[i].param);
    for (Eigen::Index j = 0; j < d; ++j) Y(static_cast<Eigen::Index>(i), j) = samples[i].point[static_cast<std::size_t>(j)];
  }
  auto sorted = params;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end(), std::not_equal_to<>()) != sorted.end(),
          "smooth: need at least two distinct parameters");
  return SmoothedCurve(GpModel::fit(std::move(kernel), std::move(params), std::move(Y), sigma2));
}

/// Attaches the arc-length table built from the posterior-mean speed.
inline SmoothedCurve reparameterize(SmoothedCurve sc, int grid_size = 2048) {
  // the table owns a copy of the model, so sc may move freely afterwards
  auto model = std::make_shared<const GpModel>(sc.model());
  sc.set_table(ArcLengthTable([model](double t) { return model->mean_derivative(t).norm(); }, kTwoPi, grid_size));
  return sc;
}

/// PL single cycle through m constant-speed points of the smoothed curve.
inline Shape discretize(const SmoothedCurve& sc, int m_points) {
  require(m_points >= 3, "discretize: m_points must be at least 3");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m_points));
  for (double t : sc.constant_speed_params(m_points)) pts.push_back(sc(t));
  return make_cycle(pts);
}

inline EctField estimate_ect(const SmoothedCurve& sc, int m_points, const DirectionSet& dirs, double a,
                             unsigned threads = 1) {
  return ect_field(discretize(sc, m_points), dirs, a, threads);
}

// ---------------------------------------------------------------------------
// Experiment

struct ExperimentConfig {
  std::string curve = "blob";                   ///< preset name, ignored when coeffs is set
  std::optional<FourierCurve::Coeffs> coeffs;   ///< explicit coefficients
  double sigma = 0.002;
  std::vector<int> ns{20, 50, 100};
  std::vector<int> seeds;
  int directions = 64;
  int m_points = 512;
  int posterior_samples = 100;
  double a = 2.0;
  double kernel_amplitude = 1.0;
  double kernel_inverse_scale = 2.0;
  std::optional<double> noise_variance;  ///< GP sigma^2; defaults to sigma^2 (floored at 1e-10)
  int reference_points = 4096;
  int table_grid = 2048;
  std::uint64_t master_seed = 0;

  FourierCurve curve_object() const { return coeffs ? FourierCurve(*coeffs) : preset_curve(curve); }
  double gp_noise_variance() const { return noise_variance.value_or(std::max(sigma * sigma, 1e-10)); }
};

/// One CSV row.
struct ExperimentRow {
  int n = 0;
  int seed = 0;
  std::string kind;  ///< "estimate", "posterior_k", or "failed"
  double ect_dist = 0.0;
  double sect_dist = 0.0;
  double sup_gap = 0.0;
  double arc_length = 0.0;
  std::string error;
};

struct ExperimentSummary {
  int n = 0;
  int runs = 0;
  int failed = 0;
  double median_ect = 0.0;
  double median_sect = 0.0;
  double median_sup_gap = 0.0;
  double median_length_error = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<ExperimentSummary> summary;
  double truth_length = 0.0;
  double truth_curvature = 0.0;
  double reference_eps = 0.0;
  bool any_failed = false;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Stream for one (n, seed) run: independent of the order runs are scheduled in.
inline std::mt19937_64 run_rng(std::uint64_t master, int n, int seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(seed)};
  return std::mt19937_64(seq);
}

namespace detail {

struct Truth {
  FourierCurve curve;
  EctField ect;
  SectField sect;
  double length = 0.0;
};

inline std::vector<ExperimentRow> run_one(const ExperimentConfig& cfg, const Truth& truth, const DirectionSet& dirs,
                                          int n, int seed) {
  std::vector<ExperimentRow> rows;
  auto rng = run_rng(cfg.master_seed, n, seed);
  const auto samples = sample_noisy(truth.curve, n, cfg.sigma, rng);
  const auto kernel = std::make_shared<SineSquaredExpKernel>(cfg.kernel_amplitude, cfg.kernel_inverse_scale);
  const auto sc = reparameterize(smooth(samples, kernel, cfg.gp_noise_variance()), cfg.table_grid);

  auto compare = [&](const Shape& shape, std::string kind, double sup_gap, double length) {
    ExperimentRow row;
    row.n = n;
    row.seed = seed;
    row.kind = std::move(kind);
    const auto f = ect_field(shape, dirs, cfg.a);
    row.ect_dist = ect_distance(f, truth.ect);
    row.sect_dist = sect_distance(sect_field(f), truth.sect);
    row.sup_gap = sup_gap;
    row.arc_length = length;
    rows.push_back(std::move(row));
  };

  // sup gap of the posterior mean against the truth at matching parameters
  constexpr int kGapGrid = 2048;
  double gap = 0.0;
  for (int i = 0; i < kGapGrid; ++i) {
    const double t = kTwoPi * i / kGapGrid;
    gap = std::max(gap, distance(sc(t), truth.curve(t)));
  }
  compare(discretize(sc, cfg.m_points), "estimate", gap, sc.table().length());

  if (cfg.posterior_samples > 0) {
    const auto probes = sc.constant_speed_params(cfg.m_points);
    const auto draws = sample_posterior(sc.model(), probes, cfg.posterior_samples, rng);
    for (std::size_t k = 0; k < draws.size(); ++k) {
      std::vector<Point> pts(probes.size());
      double g = 0.0;
      for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        pts[i].resize(static_cast<std::size_t>(draws[k].cols()));
        for (Eigen::Index j = 0; j < draws[k].cols(); ++j) pts[i][static_cast<std::size_t>(j)] = draws[k](r, j);
        g = std::max(g, distance(pts[i], truth.curve(probes[i])));
      }
      const Shape shape = make_cycle(pts);
      compare(shape, "posterior_" + std::to_string(k), g, total_arc_length(shape.complex, shape.embedding));
    }
  }
  return rows;
}

}  // namespace detail

/// Runs every (n, seed) pair, in parallel over pairs. Rows come out ordered by
/// (n, seed) as listed in the config. A failing run yields one "failed" row and
/// does not stop the others.
inline ExperimentResult run_consistency_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  require(!cfg.ns.empty(), "experiment: ns must be non-empty");
  require(!cfg.seeds.empty(), "experiment: seeds must be non-empty");
  require(cfg.directions >= 1, "experiment: directions must be positive");
  require(cfg.m_points >= 3, "experiment: m_points must be at least 3");
  require(cfg.posterior_samples >= 0, "experiment: posterior_samples must be non-negative");
  require(cfg.a > 0.0, "experiment: a must be positive");
  require(cfg.sigma >= 0.0, "experiment: sigma must be non-negative");

  detail::Truth truth;
  truth.curve = cfg.curve_object();
  ExperimentResult result;
  result.truth_length = curve_length(truth.curve);
  result.truth_curvature = curve_curvature_bound(truth.curve);
  truth.length = result.truth_length;
  const auto dirs = make_directions(2, cfg.directions, cfg.master_seed);
  const Shape ref = discretize_constant_speed(truth.curve, cfg.reference_points);
  result.reference_eps = epsilon_density(ref.complex, ref.embedding);
  truth.ect = ect_field(ref, dirs, cfg.a, threads);
  truth.sect = sect_field(truth.ect);

  struct Job {
    int n, seed;
  };
  std::vector<Job> jobs;
  for (int n : cfg.ns)
    for (int s : cfg.seeds) jobs.push_back({n, s});
  std::vector<std::vector<ExperimentRow>> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    try {
      out[i] = detail::run_one(cfg, truth, dirs, jobs[i].n, jobs[i].seed);
    } catch (const std::exception& e) {
      ExperimentRow row;
      row.n = jobs[i].n;
      row.seed = jobs[i].seed;
      row.kind = "failed";
      row.ect_dist = row.sect_dist = row.sup_gap = row.arc_length = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
      out[i] = {row};
    }
  });
  for (auto& rows : out)
    for (auto& r : rows) result.rows.push_back(std::move(r));

  for (int n : cfg.ns) {
    ExperimentSummary s;
    s.n = n;
    std::vector<double> e, se, g, le;
    for (const auto& r : result.rows) {
      if (r.n != n) continue;
      if (r.kind == "failed") {
        ++s.failed;
        ++s.runs;
        continue;
      }
      if (r.kind != "estimate") continue;
      ++s.runs;
      e.push_back(r.ect_dist);
      se.push_back(r.sect_dist);
      g.push_back(r.sup_gap);
      le.push_back(std::abs(r.arc_length - result.truth_length));
    }
    s.median_ect = median(e);
    s.median_sect = median(se);
    s.median_sup_gap = median(g);
    s.median_length_error = median(le);
    result.any_failed |= s.failed > 0;
    result.summary.push_back(s);
  }
  return result;
}

}  // namespace ectstab
