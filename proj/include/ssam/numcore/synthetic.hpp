#pragma once

#include <Eigen/Core>

#include "ssam/numcore/objective.hpp"

namespace ssam {

/// Shared machinery for the synthetic families. The stochastic loss on a batch
/// is f(w) + <xi, w> with xi = (sigma / sqrt(d)) * mean of the batch's noise
/// rows, so the minibatch gradient is grad f(w) + xi and a one-row batch has
/// E||xi||^2 = sigma^2.
class SyntheticObjective : public StochasticObjective {
 public:
  SyntheticObjective(Index d, double sigma, double radius, double init_radius);

  Index dimension() const override { return d_; }
  const PartitionPtr& partition() const override { return partition_; }

  double loss_kernel(const Eigen::VectorXd& w, const Batch& batch) const override;
  Eigen::VectorXd grad_kernel(const Eigen::VectorXd& w, const Batch& batch) const override;
  void check_batch(const Batch& batch) const override;
  ParamVector initial_point(Rng& rng) const override;

  double sigma() const noexcept { return sigma_; }
  /// Radius of the working ball on which G is valid.
  double radius() const noexcept { return radius_; }

  /// The additive gradient noise that a batch induces.
  Eigen::VectorXd noise_of(const Batch& batch) const;

 private:
  Index d_;
  double sigma_;
  double radius_;
  double init_radius_;
  PartitionPtr partition_;
};

/// f(w) = 1/2 w^T A w with symmetric positive semidefinite A.
class NoisyQuadratic final : public SyntheticObjective {
 public:
  NoisyQuadratic(Eigen::MatrixXd A, double sigma, double radius = 10.0, double init_radius = 5.0);
  static NoisyQuadratic diagonal(const Eigen::VectorXd& eigenvalues, double sigma, double radius = 10.0,
                                 double init_radius = 5.0);

  Family family() const override { return Family::NoisyQuadratic; }
  /// L = lambda_max(A), G = L * R, sigma as configured.
  std::optional<KnownConstants> known_constants() const override;

  double true_loss_kernel(const Eigen::VectorXd& w) const override;
  Eigen::VectorXd true_grad_kernel(const Eigen::VectorXd& w) const override;

  const Eigen::MatrixXd& hessian() const noexcept { return A_; }
  double lambda_max() const noexcept { return lambda_max_; }

 private:
  Eigen::MatrixXd A_;
  double lambda_max_ = 0.0;
};

/// f(w) = 1/2 ||w||^2 + beta * sum_i cos(omega * w_i). Non-convex when beta * omega^2 > 1.
class TrigNonconvex final : public SyntheticObjective {
 public:
  TrigNonconvex(Index d, double beta, double omega, double sigma, double radius = 10.0, double init_radius = 5.0);

  Family family() const override { return Family::TrigNonconvex; }
  /// L = 1 + beta * omega^2; G = R + |beta| * omega * sqrt(d) bounds the gradient on the ball.
  std::optional<KnownConstants> known_constants() const override;

  double true_loss_kernel(const Eigen::VectorXd& w) const override;
  Eigen::VectorXd true_grad_kernel(const Eigen::VectorXd& w) const override;

  double beta() const noexcept { return beta_; }
  double omega() const noexcept { return omega_; }

 private:
  double beta_;
  double omega_;
};

}  // namespace ssam
