#pragma once

#include <Eigen/Core>

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssam/numcore/param_vector.hpp"
#include "ssam/numcore/rng.hpp"

namespace ssam {

/// A minibatch. For classifiers, rows are examples and targets are labels in
/// [0, num_classes). For synthetic families each row is one standard-normal
/// noise draw of length d and targets are empty.
struct Batch {
  Eigen::MatrixXd inputs;
  std::vector<int> targets;
  int num_classes = 0;

  Index samples() const noexcept { return inputs.rows(); }
  Index features() const noexcept { return inputs.cols(); }

  /// Throws ConfigError on an empty batch, label/row count mismatch, or label >= num_classes.
  void validate() const;
};

/// One noise row per sample, each a standard-normal vector of length d.
Batch noise_batch(Rng& rng, Index d, Index samples = 1);
/// A single all-zero noise row: the stochastic oracle returns the true gradient.
Batch noiseless_batch(Index d);

enum class Family { NoisyQuadratic, TrigNonconvex, MlpClassifier };

std::string to_string(Family f);
Family parse_family(const std::string& name);

/// Constants of the bounded-gradient, bounded-variance and smoothness assumptions.
struct KnownConstants {
  double L = 0.0;
  double G = 0.0;
  double sigma = 0.0;

  void validate() const;
};

/// Loss/gradient oracle over minibatches. Immutable after construction and
/// safe to evaluate from several threads.
///
/// The *_kernel members work on raw Eigen vectors without validation; the
/// free functions below validate dimensions and finiteness and wrap results.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  virtual Family family() const = 0;
  virtual Index dimension() const = 0;
  virtual const PartitionPtr& partition() const = 0;
  virtual std::optional<KnownConstants> known_constants() const { return std::nullopt; }

  bool is_classifier() const { return family() == Family::MlpClassifier; }
  bool is_synthetic() const { return !is_classifier(); }

  /// Mean loss over the batch.
  virtual double loss_kernel(const Eigen::VectorXd& w, const Batch& batch) const = 0;
  /// Minibatch gradient of loss_kernel.
  virtual Eigen::VectorXd grad_kernel(const Eigen::VectorXd& w, const Batch& batch) const = 0;

  /// Population loss f(w). Synthetic families only.
  virtual double true_loss_kernel(const Eigen::VectorXd& w) const;
  /// Noise-free gradient. Synthetic families only.
  virtual Eigen::VectorXd true_grad_kernel(const Eigen::VectorXd& w) const;
  /// Gradient of log p_w(y | x) for one example. Classifiers only.
  virtual Eigen::VectorXd log_prob_grad_kernel(const Eigen::VectorXd& w, const Eigen::RowVectorXd& x,
                                               int y) const;

  /// Throws ConfigError when the batch's shape does not fit this objective.
  virtual void check_batch(const Batch& batch) const = 0;

  /// Seeded starting point.
  virtual ParamVector initial_point(Rng& rng) const = 0;
};

using ObjectivePtr = std::shared_ptr<const StochasticObjective>;

double eval_loss(const StochasticObjective& obj, const ParamVector& w, const Batch& batch);
ParamVector grad(const StochasticObjective& obj, const ParamVector& w, const Batch& batch);
double true_loss(const StochasticObjective& obj, const ParamVector& w);
ParamVector true_grad(const StochasticObjective& obj, const ParamVector& w);
ParamVector log_prob_grad(const StochasticObjective& obj, const ParamVector& w, const Eigen::RowVectorXd& x, int y);

/// Decorator that counts stochastic-gradient evaluations.
class CountingObjective final : public StochasticObjective {
 public:
  explicit CountingObjective(ObjectivePtr inner) : inner_(std::move(inner)) {}

  Family family() const override { return inner_->family(); }
  Index dimension() const override { return inner_->dimension(); }
  const PartitionPtr& partition() const override { return inner_->partition(); }
  std::optional<KnownConstants> known_constants() const override { return inner_->known_constants(); }

  double loss_kernel(const Eigen::VectorXd& w, const Batch& b) const override { return inner_->loss_kernel(w, b); }
  Eigen::VectorXd grad_kernel(const Eigen::VectorXd& w, const Batch& b) const override {
    grad_calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_->grad_kernel(w, b);
  }
  double true_loss_kernel(const Eigen::VectorXd& w) const override { return inner_->true_loss_kernel(w); }
  Eigen::VectorXd true_grad_kernel(const Eigen::VectorXd& w) const override { return inner_->true_grad_kernel(w); }
  Eigen::VectorXd log_prob_grad_kernel(const Eigen::VectorXd& w, const Eigen::RowVectorXd& x, int y) const override {
    return inner_->log_prob_grad_kernel(w, x, y);
  }
  void check_batch(const Batch& b) const override { inner_->check_batch(b); }
  ParamVector initial_point(Rng& rng) const override { return inner_->initial_point(rng); }

  const ObjectivePtr& inner() const { return inner_; }
  long grad_calls() const { return grad_calls_.load(); }
  void reset() { grad_calls_.store(0); }

 private:
  ObjectivePtr inner_;
  mutable std::atomic<long> grad_calls_{0};
};

}  // namespace ssam
