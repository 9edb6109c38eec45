#include "ssam/numcore/objective.hpp"

#include <cmath>
#include <limits>

namespace ssam {

void Batch::validate() const {
  if (inputs.rows() < 1) throw ConfigError("batch", "batch has no samples");
  if (!targets.empty() || num_classes > 0) {
    if (static_cast<Index>(targets.size()) != inputs.rows()) {
      throw ConfigError("batch", "label count does not match sample count");
    }
    for (int y : targets) {
      if (y < 0 || y >= num_classes) {
        throw ConfigError("batch", "label " + std::to_string(y) + " outside [0, " + std::to_string(num_classes) + ")");
      }
    }
  }
}

Batch noise_batch(Rng& rng, Index d, Index samples) {
  Batch b;
  b.inputs.resize(samples, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index r = 0; r < samples; ++r) {
    for (Index c = 0; c < d; ++c) b.inputs(r, c) = normal(rng);
  }
  return b;
}

Batch noiseless_batch(Index d) {
  Batch b;
  b.inputs = Eigen::MatrixXd::Zero(1, d);
  return b;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::NoisyQuadratic: return "noisy-quadratic";
    case Family::TrigNonconvex: return "trig-nonconvex";
    case Family::MlpClassifier: return "mlp-classifier";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "noisy-quadratic") return Family::NoisyQuadratic;
  if (name == "trig-nonconvex") return Family::TrigNonconvex;
  if (name == "mlp-classifier") return Family::MlpClassifier;
  throw ConfigError("family", "unknown objective family '" + name + "'");
}

void KnownConstants::validate() const {
  if (!(L > 0.0)) throw ConfigError("L", "smoothness constant must be positive");
  if (!(G >= 0.0)) throw ConfigError("G", "gradient bound must be nonnegative");
  if (!(sigma >= 0.0)) throw ConfigError("sigma", "noise level must be nonnegative");
}

double StochasticObjective::true_loss_kernel(const Eigen::VectorXd&) const {
  throw UnsupportedOperation("population loss is unavailable for " + to_string(family()));
}

Eigen::VectorXd StochasticObjective::true_grad_kernel(const Eigen::VectorXd&) const {
  throw UnsupportedOperation("population gradient is unavailable for " + to_string(family()));
}

Eigen::VectorXd StochasticObjective::log_prob_grad_kernel(const Eigen::VectorXd&, const Eigen::RowVectorXd&,
                                                          int) const {
  throw UnsupportedOperation("log-probability gradient requires a classifier, got " + to_string(family()));
}

namespace {

void check_weights(const StochasticObjective& obj, const ParamVector& w) {
  if (w.size() != obj.dimension()) {
    throw ConfigError("dimension", "weight length " + std::to_string(w.size()) + " does not match objective dimension " +
                                       std::to_string(obj.dimension()));
  }
}

// Group with the largest magnitude entry; the likely culprit when a finite
// weight vector produces a non-finite loss.
std::string dominant_group(const ParamVector& w) {
  std::string best;
  double best_mag = -1.0;
  for (const auto& seg : w.partition().segments()) {
    if (seg.length == 0) continue;
    const double mag = w.group(seg).cwiseAbs().maxCoeff();
    if (mag > best_mag) {
      best_mag = mag;
      best = seg.name;
    }
  }
  return best;
}

ParamVector wrap_gradient(const ParamVector& w, Eigen::VectorXd g, const char* what) {
  if (auto group = first_nonfinite_group(g, w.partition())) {
    throw NumericalError(std::string("non-finite ") + what, *group);
  }
  return w.like(std::move(g));
}

}  // namespace

double eval_loss(const StochasticObjective& obj, const ParamVector& w, const Batch& batch) {
  check_weights(obj, w);
  batch.validate();
  obj.check_batch(batch);
  const double loss = obj.loss_kernel(w.values(), batch);
  if (!std::isfinite(loss)) throw NumericalError("non-finite loss", dominant_group(w));
  return loss;
}

ParamVector grad(const StochasticObjective& obj, const ParamVector& w, const Batch& batch) {
  check_weights(obj, w);
  batch.validate();
  obj.check_batch(batch);
  return wrap_gradient(w, obj.grad_kernel(w.values(), batch), "gradient");
}

double true_loss(const StochasticObjective& obj, const ParamVector& w) {
  check_weights(obj, w);
  const double loss = obj.true_loss_kernel(w.values());
  if (!std::isfinite(loss)) throw NumericalError("non-finite loss", dominant_group(w));
  return loss;
}

ParamVector true_grad(const StochasticObjective& obj, const ParamVector& w) {
  check_weights(obj, w);
  return wrap_gradient(w, obj.true_grad_kernel(w.values()), "gradient");
}

ParamVector log_prob_grad(const StochasticObjective& obj, const ParamVector& w, const Eigen::RowVectorXd& x, int y) {
  if (!obj.is_classifier()) {
    throw UnsupportedOperation("log-probability gradient requires a classifier, got " + to_string(obj.family()));
  }
  check_weights(obj, w);
  Batch one;
  one.inputs = x;
  one.targets = {y};
  obj.check_batch(one);
  return wrap_gradient(w, obj.log_prob_grad_kernel(w.values(), x, y), "log-probability gradient");
}

}  // namespace ssam
