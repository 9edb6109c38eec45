#pragma once

#include <Eigen/Core>

#include "ssam/numcore/objective.hpp"

namespace ssam {

/// input -> hidden(tanh) -> softmax classifier with mean cross-entropy loss and
/// hand-derived gradients. hidden_units = 0 gives multinomial logistic
/// regression (input -> softmax).
///
/// Parameter groups, in order: "hidden.weight" (h x n, row-major),
/// "hidden.bias" (h), "output.weight" (C x h, row-major), "output.bias" (C).
/// Without a hidden layer only the two output groups exist, with C x n weights.
class MlpClassifier final : public StochasticObjective {
 public:
  static constexpr Index kMaxParameters = 10000;

  MlpClassifier(Index n_features, Index hidden_units, int num_classes);

  Family family() const override { return Family::MlpClassifier; }
  Index dimension() const override { return partition_->dimension(); }
  const PartitionPtr& partition() const override { return partition_; }

  double loss_kernel(const Eigen::VectorXd& w, const Batch& batch) const override;
  Eigen::VectorXd grad_kernel(const Eigen::VectorXd& w, const Batch& batch) const override;
  Eigen::VectorXd log_prob_grad_kernel(const Eigen::VectorXd& w, const Eigen::RowVectorXd& x, int y) const override;
  void check_batch(const Batch& batch) const override;
  /// Each group uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  ParamVector initial_point(Rng& rng) const override;

  /// Row-wise class probabilities.
  Eigen::MatrixXd predict_proba(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs) const;
  /// Fraction of rows whose argmax class equals the label.
  double accuracy(const Eigen::VectorXd& w, const Batch& batch) const;

  Index n_features() const noexcept { return n_in_; }
  Index hidden_units() const noexcept { return hidden_; }
  int num_classes() const noexcept { return classes_; }

 private:
  struct Forward {
    Eigen::MatrixXd hidden;  // n x h activations (empty without hidden layer)
    Eigen::MatrixXd logp;    // n x C log-probabilities
  };
  Forward forward(const Eigen::VectorXd& w, const Eigen::MatrixXd& x) const;
  /// Gradient of the summed (not averaged) cross-entropy given dloss/dlogits.
  Eigen::VectorXd backward(const Eigen::VectorXd& w, const Eigen::MatrixXd& x, const Forward& fw,
                           const Eigen::MatrixXd& dlogits) const;

  Index n_in_;
  Index hidden_;
  int classes_;
  PartitionPtr partition_;
};

}  // namespace ssam
