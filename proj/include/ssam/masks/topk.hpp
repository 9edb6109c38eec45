#pragma once

#include <Eigen/Core>

#include <vector>

#include "ssam/numcore/param_vector.hpp"

namespace ssam {

/// Indices of the k largest entries, ties broken toward the lower index.
/// Returned in ascending index order. Throws InvalidArgument if k is out of range.
std::vector<Index> arg_topk(const Eigen::Ref<const Eigen::VectorXd>& v, Index k);

/// arg_topk restricted to a candidate index set.
std::vector<Index> arg_topk_among(const Eigen::Ref<const Eigen::VectorXd>& v, const std::vector<Index>& candidates,
                                  Index k);

}  // namespace ssam
