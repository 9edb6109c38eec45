#pragma once

#include <Eigen/Core>

#include "ssam/masks/sparse_mask.hpp"
#include "ssam/numcore/objective.hpp"

namespace ssam {

/// Diagonal empirical Fisher: mean over samples of the squared log-likelihood gradient.
struct FisherEstimate {
  Eigen::VectorXd values;
  Index n_samples = 0;
};

/// Empirical Fisher over every row of `samples` (labels are the ground truth).
/// Throws UnsupportedOperation for non-classifiers.
FisherEstimate empirical_fisher(const StochasticObjective& obj, const ParamVector& w, const Batch& samples);

/// Ones at the top round((1 - s) d) Fisher entries.
SparseMask fisher_mask(const FisherEstimate& fisher, double sparsity);

/// Uniformly random mask with round((1 - s) d) ones; deterministic in the seed.
SparseMask random_mask(Index d, double sparsity, std::uint64_t seed);

}  // namespace ssam
