#pragma once

#include <Eigen/Core>

#include "ssam/numcore/param_vector.hpp"

namespace ssam {

/// Gradients with a smaller norm are treated as critical points: no perturbation.
inline constexpr double kDegenerateGradientNorm = 1e-12;

template <typename Scalar>
struct Perturbation {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> epsilon;
  bool degenerate = false;
};

/// rho * g / ||g||_2, or zero with `degenerate` set when ||g|| < 1e-12.
template <typename Derived>
Perturbation<typename Derived::Scalar> compute_perturbation(const Eigen::MatrixBase<Derived>& g,
                                                            typename Derived::Scalar rho) {
  using Scalar = typename Derived::Scalar;
  if (!(rho >= Scalar(0))) throw InvalidArgument("perturbation radius must be nonnegative");
  const Scalar n = g.norm();
  if (n < Scalar(kDegenerateGradientNorm)) {
    return {Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(g.size()), true};
  }
  return {(g * (rho / n)).eval(), false};
}

inline ParamVector compute_perturbation(const ParamVector& g, double rho) {
  return g.like(compute_perturbation(g.values(), rho).epsilon);
}

}  // namespace ssam
