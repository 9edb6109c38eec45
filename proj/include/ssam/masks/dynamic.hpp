#pragma once

#include <cstdint>
#include <string>

#include "ssam/masks/sparse_mask.hpp"
#include "ssam/numcore/param_vector.hpp"

namespace ssam {

enum class MaskKind { Fisher, Dynamic, Random, Fixed };
enum class DropCriterion { Flattest, Sharpest, Random };

std::string to_string(MaskKind k);
std::string to_string(DropCriterion c);
MaskKind parse_mask_kind(const std::string& s);
DropCriterion parse_drop_criterion(const std::string& s);

/// How and when the perturbation mask is regenerated.
struct MaskPolicy {
  MaskKind kind = MaskKind::Fixed;
  DropCriterion drop_criterion = DropCriterion::Flattest;
  double alpha = 0.5;  // drop ratio
  int update_interval = 1;  // T_m, in epochs
  Index fisher_samples = 128;  // N_F

  void validate() const;
  bool operator==(const MaskPolicy&) const = default;
};

/// (alpha / 2) (1 + cos(t pi / T)). Throws InvalidArgument unless 0 <= t <= T.
double cosine_decay(double t, double T, double alpha);

struct DropGrowResult {
  SparseMask mask;
  Index dropped = 0;
  bool clamped = false;
};

/// Drop round(cosine_decay(t, T, alpha) * (1 - s) d) active entries chosen by
/// the policy's criterion on |g|, then activate as many entries drawn
/// uniformly from those inactive before the drop. The drop count is clamped to
/// what both the active and inactive sets can supply.
DropGrowResult drop_grow_update(const SparseMask& mask, const Eigen::VectorXd& g, double t, double T,
                                const MaskPolicy& policy, std::uint64_t seed);

}  // namespace ssam
