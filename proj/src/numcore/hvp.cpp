#include "ssam/numcore/hvp.hpp"

#include <cmath>
#include <limits>

namespace ssam {

double default_fd_step(const Eigen::VectorXd& w) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + w.norm());
}

HvpOracle::HvpOracle(ObjectivePtr obj, ParamVector w, std::optional<Batch> batch, std::optional<double> step)
    : obj_(std::move(obj)), w_(std::move(w)), batch_(std::move(batch)), h_(step.value_or(default_fd_step(w_.values()))) {
  if (!obj_) throw ConfigError("objective", "null objective");
  if (w_.size() != obj_->dimension()) throw ConfigError("dimension", "reference point does not match objective");
  if (!(h_ > 0.0)) throw ConfigError("step", "finite-difference step must be positive");
  if (obj_->is_classifier()) {
    if (!batch_) throw ConfigError("batch", "classifier Hessian needs a fixed batch");
    batch_->validate();
    obj_->check_batch(*batch_);
  }
}

Eigen::VectorXd HvpOracle::gradient_at(const Eigen::VectorXd& w) const {
  if (obj_->is_synthetic()) return obj_->true_grad_kernel(w);
  return obj_->grad_kernel(w, *batch_);
}

Eigen::VectorXd HvpOracle::apply(const Eigen::VectorXd& v) const {
  if (v.size() != w_.size()) throw ConfigError("dimension", "direction length does not match reference point");
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidArgument("Hessian-vector product needs a nonzero direction");
  const Eigen::VectorXd unit = v / n;
  const Eigen::VectorXd gp = gradient_at(w_.values() + h_ * unit);
  const Eigen::VectorXd gm = gradient_at(w_.values() - h_ * unit);
  Eigen::VectorXd out = (gp - gm) * (n / (2.0 * h_));
  if (!out.allFinite()) throw NumericalError("non-finite Hessian-vector product");
  return out;
}

ParamVector HvpOracle::apply(const ParamVector& v) const { return w_.like(apply(v.values())); }

}  // namespace ssam
