#pragma once

#include "ssam/optim/optimizer.hpp"

namespace ssam {

/// Share of one training step spent in the forward pass; the rest is backward.
struct CostModel {
  double forward_fraction = 0.3;

  double backward_fraction() const noexcept { return 1.0 - forward_fraction; }
  void validate() const;
};

/// Step cost relative to SGD: sgd 1, sam 2, ssam 1 + c_f + (1 - s) c_b.
double flops_estimate(const CostModel& model, OptimizerKind kind, double sparsity);

/// Two-decimal value as printed in reports.
double round_cost(double cost);

}  // namespace ssam
