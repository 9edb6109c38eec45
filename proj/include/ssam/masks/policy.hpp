#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>

#include "ssam/masks/dynamic.hpp"
#include "ssam/masks/fisher.hpp"

namespace ssam {

/// Everything a mask generator may need. Pointers may be null when the
/// policy in use does not read them (e.g. no training set for random masks).
struct MaskContext {
  const StochasticObjective* objective = nullptr;
  const ParamVector* weights = nullptr;
  const Batch* training_set = nullptr;
  const SparseMask* current = nullptr;
  const Eigen::VectorXd* latest_gradient = nullptr;
  Index dimension = 0;
  double sparsity = 0.0;
  int total_epochs = 1;
  std::uint64_t seed = 0;
};

/// `count` rows drawn without replacement (all rows if count >= samples).
Batch sample_rows(const Batch& data, Index count, Rng& rng);

/// Mask at initialization: Fisher policies score the initial weights, every
/// other policy starts from a random mask.
SparseMask initial_mask(const MaskPolicy& policy, const MaskContext& ctx);

/// A fresh mask when epoch % T_m == 0 and the policy is not fixed; nullopt otherwise.
std::optional<SparseMask> maybe_regenerate(int epoch, const MaskPolicy& policy, const MaskContext& ctx);

}  // namespace ssam
