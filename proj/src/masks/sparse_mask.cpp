#include "ssam/masks/sparse_mask.hpp"

#include <cmath>
#include <numeric>

namespace ssam {

void validate_sparsity(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw InvalidArgument("sparsity must lie in [0, 1), got " + std::to_string(s));
}

Index active_count(Index d, double sparsity) {
  validate_sparsity(sparsity);
  return static_cast<Index>(std::llround((1.0 - sparsity) * static_cast<double>(d)));
}

std::vector<Index> SparseMask::all_indices(Index d) {
  std::vector<Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

SparseMask::SparseMask(Index d, double sparsity, const std::vector<Index>& active)
    : bits_(static_cast<std::size_t>(d), 0), sparsity_(sparsity) {
  const Index want = active_count(d, sparsity);
  for (Index i : active) {
    if (i < 0 || i >= d) throw InvalidArgument("mask index " + std::to_string(i) + " out of range");
    auto& b = bits_[static_cast<std::size_t>(i)];
    if (b) throw InvalidArgument("duplicate mask index " + std::to_string(i));
    b = 1;
  }
  popcount_ = static_cast<Index>(active.size());
  if (popcount_ != want) {
    throw InvalidArgument("mask has " + std::to_string(popcount_) + " active entries, sparsity requires " +
                          std::to_string(want));
  }
}

SparseMask SparseMask::from_bits(std::vector<std::uint8_t> bits, double sparsity) {
  std::vector<Index> active;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw InvalidArgument("mask bits must be 0 or 1");
    if (bits[i]) active.push_back(static_cast<Index>(i));
  }
  return SparseMask(static_cast<Index>(bits.size()), sparsity, active);
}

std::vector<Index> SparseMask::active_indices() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(popcount_));
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<Index>(i));
  return out;
}

std::vector<Index> SparseMask::inactive_indices() const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (!bits_[i]) out.push_back(static_cast<Index>(i));
  return out;
}

Eigen::VectorXd SparseMask::as_vector() const {
  Eigen::VectorXd v(size());
  for (Index i = 0; i < size(); ++i) v[i] = bits_[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  return v;
}

Eigen::VectorXd SparseMask::apply(const Eigen::VectorXd& v) const {
  if (v.size() != size()) throw ConfigError("mask", "mask length does not match vector length");
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = bits_[static_cast<std::size_t>(i)] ? v[i] : 0.0;
  return out;
}

}  // namespace ssam
