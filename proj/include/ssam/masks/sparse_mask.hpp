#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "ssam/numcore/param_vector.hpp"

namespace ssam {

/// Number of active coordinates for dimension d at sparsity s:
/// round((1 - s) d), rounding half away from zero.
Index active_count(Index d, double sparsity);

/// Binary perturbation mask. Invariant: exactly active_count(d, s) ones.
class SparseMask {
 public:
  SparseMask() = default;
  /// Throws InvalidArgument if the index set is out of range, has duplicates, or has the wrong size.
  SparseMask(Index d, double sparsity, const std::vector<Index>& active);
  /// Throws InvalidArgument if a bit is not 0/1 or the popcount does not match s.
  static SparseMask from_bits(std::vector<std::uint8_t> bits, double sparsity);
  static SparseMask ones(Index d) { return SparseMask(d, 0.0, all_indices(d)); }

  Index size() const noexcept { return static_cast<Index>(bits_.size()); }
  double sparsity() const noexcept { return sparsity_; }
  Index popcount() const noexcept { return popcount_; }
  bool active(Index i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  std::vector<Index> active_indices() const;
  std::vector<Index> inactive_indices() const;

  /// 0/1 vector.
  Eigen::VectorXd as_vector() const;
  /// v (.) m.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  bool operator==(const SparseMask&) const = default;

 private:
  static std::vector<Index> all_indices(Index d);

  std::vector<std::uint8_t> bits_;
  double sparsity_ = 0.0;
  Index popcount_ = 0;
};

/// Checked sparsity in [0, 1).
void validate_sparsity(double s);

}  // namespace ssam
