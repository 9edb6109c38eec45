#include "ssam/masks/fisher.hpp"

#include <algorithm>
#include <numeric>

#include "ssam/masks/topk.hpp"
#include "ssam/numcore/rng.hpp"

namespace ssam {

FisherEstimate empirical_fisher(const StochasticObjective& obj, const ParamVector& w, const Batch& samples) {
  if (!obj.is_classifier()) {
    throw UnsupportedOperation("empirical Fisher requires a classifier, got " + to_string(obj.family()));
  }
  samples.validate();
  obj.check_batch(samples);
  if (w.size() != obj.dimension()) throw ConfigError("dimension", "weights do not match objective");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(w.size());
  for (Index i = 0; i < samples.samples(); ++i) {
    const Eigen::RowVectorXd x = samples.inputs.row(i);
    acc += obj.log_prob_grad_kernel(w.values(), x, samples.targets[static_cast<std::size_t>(i)]).array().square().matrix();
  }
  acc /= static_cast<double>(samples.samples());
  if (auto g = first_nonfinite_group(acc, w.partition())) throw NumericalError("non-finite Fisher estimate", *g);
  return {std::move(acc), samples.samples()};
}

SparseMask fisher_mask(const FisherEstimate& fisher, double sparsity) {
  const Index d = fisher.values.size();
  return SparseMask(d, sparsity, arg_topk(fisher.values, active_count(d, sparsity)));
}

SparseMask random_mask(Index d, double sparsity, std::uint64_t seed) {
  const Index k = active_count(d, sparsity);
  std::vector<Index> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  Rng rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, rng);
  return SparseMask(d, sparsity, chosen);
}

}  // namespace ssam
