#pragma once

#include <Eigen/Core>

#include <optional>

#include "ssam/numcore/objective.hpp"

namespace ssam {

/// Default central-difference step: cbrt(machine epsilon) * (1 + ||w||).
double default_fd_step(const Eigen::VectorXd& w);

/// Hessian-vector products at a fixed reference point by central differences
/// of the gradient. Synthetic objectives use the noise-free gradient; for
/// classifiers a fixed batch is required so the Hessian is well defined.
class HvpOracle {
 public:
  HvpOracle(ObjectivePtr obj, ParamVector w, std::optional<Batch> batch = std::nullopt,
            std::optional<double> step = std::nullopt);

  /// H v ~ (grad(w + h v_hat) - grad(w - h v_hat)) * ||v|| / 2h. Throws
  /// InvalidArgument for a zero direction.
  ParamVector apply(const ParamVector& v) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  Index dimension() const noexcept { return w_.size(); }
  const ParamVector& point() const noexcept { return w_; }
  double step() const noexcept { return h_; }

 private:
  Eigen::VectorXd gradient_at(const Eigen::VectorXd& w) const;

  ObjectivePtr obj_;
  ParamVector w_;
  std::optional<Batch> batch_;
  double h_;
};

inline ParamVector hvp(const HvpOracle& oracle, const ParamVector& v) { return oracle.apply(v); }

}  // namespace ssam
