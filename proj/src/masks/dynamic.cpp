#include "ssam/masks/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssam/masks/topk.hpp"
#include "ssam/numcore/rng.hpp"

namespace ssam {

std::string to_string(MaskKind k) {
  switch (k) {
    case MaskKind::Fisher: return "fisher";
    case MaskKind::Dynamic: return "dynamic";
    case MaskKind::Random: return "random";
    case MaskKind::Fixed: return "fixed";
  }
  return "unknown";
}

std::string to_string(DropCriterion c) {
  switch (c) {
    case DropCriterion::Flattest: return "flattest";
    case DropCriterion::Sharpest: return "sharpest";
    case DropCriterion::Random: return "random";
  }
  return "unknown";
}

MaskKind parse_mask_kind(const std::string& s) {
  if (s == "fisher") return MaskKind::Fisher;
  if (s == "dynamic") return MaskKind::Dynamic;
  if (s == "random") return MaskKind::Random;
  if (s == "fixed") return MaskKind::Fixed;
  throw ConfigError("kind", "unknown mask policy '" + s + "'");
}

DropCriterion parse_drop_criterion(const std::string& s) {
  if (s == "flattest") return DropCriterion::Flattest;
  if (s == "sharpest") return DropCriterion::Sharpest;
  if (s == "random") return DropCriterion::Random;
  throw ConfigError("drop_criterion", "unknown drop criterion '" + s + "'");
}

void MaskPolicy::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "drop ratio must lie in [0, 1]");
  if (update_interval < 1) throw ConfigError("T_m", "mask update interval must be at least 1");
  if (fisher_samples < 1) throw ConfigError("N_F", "Fisher sample count must be at least 1");
}

double cosine_decay(double t, double T, double alpha) {
  if (!(T > 0.0)) throw InvalidArgument("cosine decay needs a positive horizon");
  if (!(t >= 0.0 && t <= T)) throw InvalidArgument("cosine decay step outside [0, T]");
  return 0.5 * alpha * (1.0 + std::cos(t * std::numbers::pi / T));
}

DropGrowResult drop_grow_update(const SparseMask& mask, const Eigen::VectorXd& g, double t, double T,
                                const MaskPolicy& policy, std::uint64_t seed) {
  policy.validate();
  const Index d = mask.size();
  if (g.size() != d) throw ConfigError("mask", "gradient length does not match mask length");

  const double rate = cosine_decay(t, T, policy.alpha);
  const Index wanted = static_cast<Index>(std::llround(rate * (1.0 - mask.sparsity()) * static_cast<double>(d)));
  std::vector<Index> active = mask.active_indices();
  std::vector<Index> inactive = mask.inactive_indices();
  const Index limit = std::min<Index>(static_cast<Index>(active.size()), static_cast<Index>(inactive.size()));
  DropGrowResult result{mask, std::min(wanted, limit), wanted > limit};
  if (result.dropped == 0) return result;

  Rng rng(seed);
  std::vector<Index> drop;
  switch (policy.drop_criterion) {
    case DropCriterion::Flattest:
      drop = arg_topk_among(-g.cwiseAbs(), active, result.dropped);
      break;
    case DropCriterion::Sharpest:
      drop = arg_topk_among(g.cwiseAbs(), active, result.dropped);
      break;
    case DropCriterion::Random:
      std::sample(active.begin(), active.end(), std::back_inserter(drop), result.dropped, rng);
      break;
  }
  std::vector<Index> grow;
  std::sample(inactive.begin(), inactive.end(), std::back_inserter(grow), result.dropped, rng);

  std::vector<std::uint8_t> bits = mask.bits();
  for (Index i : drop) bits[static_cast<std::size_t>(i)] = 0;
  for (Index i : grow) bits[static_cast<std::size_t>(i)] = 1;
  result.mask = SparseMask::from_bits(std::move(bits), mask.sparsity());
  return result;
}

}  // namespace ssam
