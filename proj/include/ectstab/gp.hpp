#pragma once

/// @file
/// Exact Gaussian-process regression on a one-dimensional parameter domain:
/// regularized Gram factorization, posterior mean and variance, the posterior
/// of the first and second derivative, and posterior function draws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ectstab/error.hpp"
#include "ectstab/kernel.hpp"

namespace ectstab {

inline Eigen::MatrixXd gram(const Kernel& k, const std::vector<double>& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = k(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
  return K;
}

inline Eigen::MatrixXd cross_gram(const Kernel& k, const std::vector<double>& s, const std::vector<double>& t) {
  Eigen::MatrixXd K(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k(s[i], t[j]);
  return K;
}

/// Lower Cholesky factor of A + jitter I, trying jitter = 0, then start, start * 10,
/// ... up to max_jitter. Sets jitter_used. Returns false if every attempt fails
/// or the rebuild residual exceeds tol.
inline bool cholesky_with_jitter(const Eigen::MatrixXd& A, Eigen::MatrixXd& L, double& jitter_used, double tol,
                                 double start = 1e-12, double max_jitter = 1e-6, bool try_zero = true) {
  const auto n = A.rows();
  std::vector<double> schedule;
  if (try_zero) schedule.push_back(0.0);
  for (double j = start; j <= max_jitter * (1.0 + 1e-9); j *= 10.0) schedule.push_back(j);
  for (double j : schedule) {
    Eigen::MatrixXd B = A;
    B.diagonal().array() += j;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd Lj = llt.matrixL();
    if (n > 0 && ((Lj * Lj.transpose() - B).cwiseAbs().maxCoeff() > tol || !Lj.allFinite())) continue;
    L = std::move(Lj);
    jitter_used = j;
    return true;
  }
  return false;
}

/// Posterior of a zero-mean GP with kernel k given noisy observations Y (one
/// column per output coordinate) at parameters a, noise variance sigma2.
/// Immutable after fit(); queries are thread-safe.
class GpModel {
 public:
  static GpModel fit(KernelPtr kernel, std::vector<double> params, Eigen::MatrixXd Y, double sigma2) {
    require(kernel != nullptr, "gp fit: kernel is null");
    require(sigma2 > 0.0 && std::isfinite(sigma2), "gp fit: noise variance must be positive");
    require(Y.rows() == static_cast<Eigen::Index>(params.size()), "gp fit: one observation row per parameter");
    for (double p : params) require(std::isfinite(p), "gp fit: parameters must be finite");
    require(Y.allFinite(), "gp fit: observations must be finite");

    GpModel m;
    m.kernel_ = std::move(kernel);
    m.params_ = std::move(params);
    m.sigma2_ = sigma2;
    const auto n = static_cast<Eigen::Index>(m.params_.size());
    m.outputs_ = Y.cols();
    Eigen::MatrixXd B = gram(*m.kernel_, m.params_);
    B.diagonal().array() += sigma2;
    const double tol = 1e-8 * std::max<double>(1.0, static_cast<double>(n));
    if (!cholesky_with_jitter(B, m.L_, m.jitter_, tol)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B, Eigen::EigenvaluesOnly);
      std::ostringstream msg;
      msg << "gp fit: factorization failed after jitter 1e-6; eigenvalue range ["
          << eig.eigenvalues().minCoeff() << ", " << eig.eigenvalues().maxCoeff() << "]";
      fail(ErrorKind::runtime, msg.str());
    }
    m.Y_ = std::move(Y);
    m.alpha_ = m.solve(m.Y_);
    return m;
  }

  /// Single-output convenience.
  static GpModel fit(KernelPtr kernel, std::vector<double> params, const std::vector<double>& y, double sigma2) {
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(y.size()), 1);
    for (std::size_t i = 0; i < y.size(); ++i) Y(static_cast<Eigen::Index>(i), 0) = y[i];
    return fit(std::move(kernel), std::move(params), std::move(Y), sigma2);
  }

  const Kernel& kernel() const { return *kernel_; }
  const KernelPtr& kernel_ptr() const { return kernel_; }
  const std::vector<double>& params() const { return params_; }
  double sigma2() const { return sigma2_; }
  double jitter() const { return jitter_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(params_.size()); }
  Eigen::Index outputs() const { return outputs_; }
  const Eigen::MatrixXd& factor() const { return L_; }

  /// B^{-1} R via the stored factor.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& R) const {
    if (size() == 0) return R;
    const auto Lv = L_.triangularView<Eigen::Lower>();
    return Lv.transpose().solve(Lv.solve(R));
  }

  // ---- mean

  Eigen::VectorXd mean(double t) const { return row(t, [&](double a) { return (*kernel_)(t, a); }); }
  Eigen::VectorXd mean_derivative(double t) const { return row(t, [&](double a) { return kernel_->kx(t, a); }); }
  Eigen::VectorXd mean_second_derivative(double t) const {
    return row(t, [&](double a) { return kernel_->kxx(t, a); });
  }
  double mean(double t, Eigen::Index j) const { return mean(t)(j); }

  // ---- variances, clamped at 0

  double variance(double t) const {
    return reduced((*kernel_)(t, t), [&](double a) { return (*kernel_)(a, t); });
  }

  /// k_xy(t, t) - K_x(t, a) B^{-1} K_y(a, t).
  double derivative_variance(double t) const {
    return reduced(kernel_->kxy(t, t), [&](double a) { return kernel_->kx(t, a); });
  }

  /// k_xxyy(t, t) - K_xx(t, a) B^{-1} K_yy(a, t).
  double second_derivative_variance(double t) const {
    return reduced(kernel_->kxxyy(t, t), [&](double a) { return kernel_->kxx(t, a); });
  }

  /// Posterior covariance of the function values at the probes.
  Eigen::MatrixXd covariance(const std::vector<double>& probes) const {
    Eigen::MatrixXd C = gram(*kernel_, probes);
    if (size() == 0) return C;
    const Eigen::MatrixXd Kap = cross_gram(*kernel_, params_, probes);
    const Eigen::MatrixXd W = L_.triangularView<Eigen::Lower>().solve(Kap);
    C.noalias() -= W.transpose() * W;
    return 0.5 * (C + C.transpose());
  }

  /// Posterior mean at the probes, one column per output.
  Eigen::MatrixXd mean_at(const std::vector<double>& probes) const {
    Eigen::MatrixXd M(static_cast<Eigen::Index>(probes.size()), outputs_);
    for (std::size_t i = 0; i < probes.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = mean(probes[i]).transpose();
    return M;
  }

 private:
  template <class Entry>
  Eigen::VectorXd row(double, Entry entry) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(outputs_);
    for (Eigen::Index i = 0; i < size(); ++i) out += entry(params_[static_cast<std::size_t>(i)]) * alpha_.row(i).transpose();
    return out;
  }

  template <class Entry>
  double reduced(double prior, Entry entry) const {
    if (size() == 0) return std::max(0.0, prior);
    Eigen::VectorXd k(size());
    for (Eigen::Index i = 0; i < size(); ++i) k(i) = entry(params_[static_cast<std::size_t>(i)]);
    L_.triangularView<Eigen::Lower>().solveInPlace(k);
    return std::max(0.0, prior - k.squaredNorm());
  }

  KernelPtr kernel_;
  std::vector<double> params_;
  double sigma2_ = 0.0;
  double jitter_ = 0.0;
  Eigen::Index outputs_ = 0;
  Eigen::MatrixXd L_;
  Eigen::MatrixXd Y_;
  Eigen::MatrixXd alpha_;
};

/// Prior model: no observations.
inline GpModel prior_model(KernelPtr kernel, Eigen::Index outputs = 1, double sigma2 = 1.0) {
  return GpModel::fit(std::move(kernel), {}, Eigen::MatrixXd(0, outputs), sigma2);
}

/// Draws from the joint posterior at the probes. Each draw is a probes x outputs
/// matrix; the outputs share the covariance and are drawn independently.
/// The covariance gets 1e-10 I (escalated by 10 up to 1e-6 if needed).
inline std::vector<Eigen::MatrixXd> sample_posterior(const GpModel& model, const std::vector<double>& probes,
                                                     int count, std::mt19937_64& rng) {
  require(!probes.empty(), "sample_posterior: need at least one probe");
  require(count >= 0, "sample_posterior: count must be non-negative");
  const Eigen::MatrixXd C = model.covariance(probes);
  Eigen::MatrixXd L;
  double jitter = 0.0;
  const double scale = std::max(1.0, C.diagonal().cwiseAbs().maxCoeff());
  if (!cholesky_with_jitter(C, L, jitter, 1e-8 * scale * static_cast<double>(probes.size()), 1e-10, 1e-6, false))
    fail(ErrorKind::runtime, "sample_posterior: covariance factorization failed after jitter 1e-6");
  const Eigen::MatrixXd M = model.mean_at(probes);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::MatrixXd> draws;
  draws.reserve(static_cast<std::size_t>(count));
  const auto m = static_cast<Eigen::Index>(probes.size());
  for (int c = 0; c < count; ++c) {
    Eigen::MatrixXd Z(m, model.outputs());
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
      for (Eigen::Index i = 0; i < m; ++i) Z(i, j) = normal(rng);
    draws.push_back(M + L * Z);
  }
  return draws;
}

inline std::vector<Eigen::MatrixXd> sample_posterior(const GpModel& model, const std::vector<double>& probes,
                                                     int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_posterior(model, probes, count, rng);
}

}  // namespace ectstab
