#include "ssam/masks/topk.hpp"

#include <algorithm>
#include <numeric>

namespace ssam {

std::vector<Index> arg_topk_among(const Eigen::Ref<const Eigen::VectorXd>& v, const std::vector<Index>& candidates,
                                  Index k) {
  if (k < 0 || k > static_cast<Index>(candidates.size())) {
    throw InvalidArgument("top-k size " + std::to_string(k) + " exceeds " + std::to_string(candidates.size()) +
                          " candidates");
  }
  std::vector<Index> order = candidates;
  auto before = [&](Index a, Index b) { return v[a] > v[b] || (v[a] == v[b] && a < b); };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), before);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<Index> arg_topk(const Eigen::Ref<const Eigen::VectorXd>& v, Index k) {
  std::vector<Index> all(static_cast<std::size_t>(v.size()));
  std::iota(all.begin(), all.end(), Index{0});
  return arg_topk_among(v, all, k);
}

}  // namespace ssam
