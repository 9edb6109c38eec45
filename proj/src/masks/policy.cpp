#include "ssam/masks/policy.hpp"

#include <algorithm>
#include <numeric>

namespace ssam {

namespace {

template <typename T>
const T& require(const T* p, const char* what) {
  if (!p) throw ConfigError("mask", std::string("mask generation needs ") + what);
  return *p;
}

SparseMask fisher_from_context(const MaskPolicy& policy, const MaskContext& ctx) {
  const auto& obj = require(ctx.objective, "an objective");
  const auto& data = require(ctx.training_set, "a training set");
  Rng rng(ctx.seed);
  const Batch sample = sample_rows(data, policy.fisher_samples, rng);
  return fisher_mask(empirical_fisher(obj, require(ctx.weights, "weights"), sample), ctx.sparsity);
}

}  // namespace

Batch sample_rows(const Batch& data, Index count, Rng& rng) {
  const Index n = data.samples();
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<Index> pick;
  std::sample(all.begin(), all.end(), std::back_inserter(pick), std::min(count, n), rng);
  Batch out;
  out.num_classes = data.num_classes;
  out.inputs.resize(static_cast<Index>(pick.size()), data.features());
  for (std::size_t r = 0; r < pick.size(); ++r) {
    out.inputs.row(static_cast<Index>(r)) = data.inputs.row(pick[r]);
    if (!data.targets.empty()) out.targets.push_back(data.targets[static_cast<std::size_t>(pick[r])]);
  }
  return out;
}

SparseMask initial_mask(const MaskPolicy& policy, const MaskContext& ctx) {
  policy.validate();
  if (policy.kind == MaskKind::Fisher) return fisher_from_context(policy, ctx);
  return random_mask(ctx.dimension, ctx.sparsity, ctx.seed);
}

std::optional<SparseMask> maybe_regenerate(int epoch, const MaskPolicy& policy, const MaskContext& ctx) {
  if (epoch < 1) throw InvalidArgument("mask regeneration epochs start at 1");
  policy.validate();
  if (policy.kind == MaskKind::Fixed || epoch % policy.update_interval != 0) return std::nullopt;
  switch (policy.kind) {
    case MaskKind::Fisher:
      return fisher_from_context(policy, ctx);
    case MaskKind::Dynamic: {
      const auto& current = require(ctx.current, "the current mask");
      const auto& g = require(ctx.latest_gradient, "a gradient");
      const double T = static_cast<double>(std::max(ctx.total_epochs, epoch));
      return drop_grow_update(current, g, epoch, T, policy, ctx.seed).mask;
    }
    case MaskKind::Random:
      return random_mask(ctx.dimension, ctx.sparsity, ctx.seed);
    case MaskKind::Fixed:
      break;
  }
  return std::nullopt;
}

}  // namespace ssam
