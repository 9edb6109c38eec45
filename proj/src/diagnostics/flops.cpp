#include "ssam/diagnostics/flops.hpp"

#include <cmath>

#include "ssam/error.hpp"
#include "ssam/masks/sparse_mask.hpp"

namespace ssam {

void CostModel::validate() const {
  if (!(forward_fraction > 0.0 && forward_fraction < 1.0))
    throw ConfigError("forward_fraction", "must lie in (0, 1)");
}

double flops_estimate(const CostModel& model, OptimizerKind kind, double sparsity) {
  model.validate();
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) throw InvalidArgument("flops_estimate: sparsity must lie in [0, 1]");
  switch (kind) {
    case OptimizerKind::Sgd:
      return 1.0;
    case OptimizerKind::Sam:
      return 2.0;
    case OptimizerKind::Ssam:
      return 1.0 + model.forward_fraction + (1.0 - sparsity) * model.backward_fraction();
  }
  throw InvalidArgument("flops_estimate: unknown optimizer");
}

double round_cost(double cost) { return std::round(cost * 100.0) / 100.0; }

}  // namespace ssam
