#include <Eigen/Eigenvalues>

#include <cmath>

#include "ssam/numcore/synthetic.hpp"

namespace ssam {

SyntheticObjective::SyntheticObjective(Index d, double sigma, double radius, double init_radius)
    : d_(d), sigma_(sigma), radius_(radius), init_radius_(init_radius), partition_(Partition::single(d)) {
  if (d < 1) throw ConfigError("dimension", "dimension must be at least 1");
  if (!(sigma >= 0.0)) throw ConfigError("sigma", "noise level must be nonnegative");
  if (!(radius > 0.0)) throw ConfigError("radius", "working-ball radius must be positive");
  if (!(init_radius >= 0.0) || init_radius > radius) {
    throw ConfigError("init_radius", "initial radius must lie in [0, radius]");
  }
}

Eigen::VectorXd SyntheticObjective::noise_of(const Batch& batch) const {
  if (sigma_ == 0.0) return Eigen::VectorXd::Zero(d_);
  const double scale = sigma_ / std::sqrt(static_cast<double>(d_));
  return batch.inputs.colwise().mean().transpose() * scale;
}

double SyntheticObjective::loss_kernel(const Eigen::VectorXd& w, const Batch& batch) const {
  return true_loss_kernel(w) + noise_of(batch).dot(w);
}

Eigen::VectorXd SyntheticObjective::grad_kernel(const Eigen::VectorXd& w, const Batch& batch) const {
  return true_grad_kernel(w) + noise_of(batch);
}

void SyntheticObjective::check_batch(const Batch& batch) const {
  if (batch.features() != d_) {
    throw ConfigError("batch", "noise rows have length " + std::to_string(batch.features()) + ", expected " +
                                   std::to_string(d_));
  }
}

ParamVector SyntheticObjective::initial_point(Rng& rng) const {
  return ParamVector(uniform_in_ball(rng, d_, init_radius_), partition_);
}

NoisyQuadratic::NoisyQuadratic(Eigen::MatrixXd A, double sigma, double radius, double init_radius)
    : SyntheticObjective(A.rows(), sigma, radius, init_radius), A_(std::move(A)) {
  if (A_.rows() != A_.cols()) throw ConfigError("A", "quadratic form must be square");
  if (!A_.allFinite() || (A_ - A_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw ConfigError("A", "quadratic form must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < 0.0) throw ConfigError("A", "quadratic form must be positive semidefinite");
  lambda_max_ = eig.eigenvalues().maxCoeff();
}

NoisyQuadratic NoisyQuadratic::diagonal(const Eigen::VectorXd& eigenvalues, double sigma, double radius,
                                        double init_radius) {
  return NoisyQuadratic(eigenvalues.asDiagonal().toDenseMatrix(), sigma, radius, init_radius);
}

std::optional<KnownConstants> NoisyQuadratic::known_constants() const {
  if (!(lambda_max_ > 0.0)) return std::nullopt;
  return KnownConstants{lambda_max_, lambda_max_ * radius(), sigma()};
}

double NoisyQuadratic::true_loss_kernel(const Eigen::VectorXd& w) const { return 0.5 * w.dot(A_ * w); }

Eigen::VectorXd NoisyQuadratic::true_grad_kernel(const Eigen::VectorXd& w) const { return A_ * w; }

}  // namespace ssam
