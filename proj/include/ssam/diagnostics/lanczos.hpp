#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <optional>

#include "ssam/error.hpp"
#include "ssam/numcore/hvp.hpp"
#include "ssam/numcore/rng.hpp"

namespace ssam {

inline constexpr double kLanczosBreakdown = 1e-12;

struct SpectrumReport {
  /// Top Ritz values, descending.
  Eigen::VectorXd eigenvalues;
  /// |beta_m s_mi| for each returned Ritz pair.
  Eigen::VectorXd residuals;
  Index iterations = 0;
  bool breakdown = false;
  /// lambda_1 / lambda_5 when at least five values exist and lambda_5 != 0.
  std::optional<double> ratio_1_5;
};

/// Lanczos with full reorthogonalization for a symmetric operator `op`
/// mapping R^d -> R^d. Requires 1 <= k <= iters <= d.
template <typename Operator>
SpectrumReport lanczos_spectrum(const Operator& op, Index d, Index k, Index iters, std::uint64_t seed) {
  if (k < 1 || k > iters || iters > d) throw InvalidArgument("lanczos: need 1 <= k <= iters <= d");
  Rng rng(seed);
  Eigen::MatrixXd q(d, iters);
  Eigen::VectorXd alpha(iters), beta(iters);
  Eigen::VectorXd v = standard_normal(rng, d);
  q.col(0) = v / v.norm();

  Index m = iters;
  bool breakdown = false;
  for (Index j = 0; j < iters; ++j) {
    Eigen::VectorXd w = op(Eigen::VectorXd(q.col(j)));
    alpha[j] = q.col(j).dot(w);
    w -= alpha[j] * q.col(j);
    if (j > 0) w -= beta[j - 1] * q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = q.leftCols(j + 1);
      w -= basis * (basis.transpose() * w);
    }
    beta[j] = w.norm();
    if (beta[j] < kLanczosBreakdown) {
      m = j + 1;
      breakdown = j + 1 < iters;
      beta[j] = 0.0;
      break;
    }
    if (j + 1 < iters) q.col(j + 1) = w / beta[j];
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  if (eig.info() != Eigen::Success) throw NumericalError("lanczos: tridiagonal eigensolve failed");

  const Index count = std::min(k, m);
  SpectrumReport out;
  out.eigenvalues.resize(count);
  out.residuals.resize(count);
  for (Index i = 0; i < count; ++i) {
    const Index src = m - 1 - i;
    out.eigenvalues[i] = eig.eigenvalues()[src];
    out.residuals[i] = std::abs(beta[m - 1] * eig.eigenvectors()(m - 1, src));
  }
  out.iterations = m;
  out.breakdown = breakdown;
  if (count >= 5 && out.eigenvalues[4] != 0.0) out.ratio_1_5 = out.eigenvalues[0] / out.eigenvalues[4];
  return out;
}

inline SpectrumReport lanczos_spectrum(const HvpOracle& oracle, Index k, Index iters, std::uint64_t seed) {
  return lanczos_spectrum([&](const Eigen::VectorXd& v) { return oracle.apply(v); }, oracle.dimension(), k, iters,
                          seed);
}

}  // namespace ssam
