#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

#include "ssam/error.hpp"
#include "ssam/numcore/objective.hpp"

namespace ssam {

inline constexpr double kFilterMinNorm = 1e-12;

/// Rescales each partition group of `direction` to the norm of the matching
/// group of `reference`. Groups with norm below 1e-12 become zero.
template <typename Scalar>
BasicParamVector<Scalar> filter_normalize(const BasicParamVector<Scalar>& direction,
                                          const BasicParamVector<Scalar>& reference) {
  if (direction.partition() != reference.partition())
    throw ConfigError("direction", "filter_normalize: partition mismatch");
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec out = direction.values();
  for (const Segment& seg : direction.partition().segments()) {
    auto block = out.segment(seg.offset, seg.length);
    const Scalar n = block.norm();
    if (n < Scalar(kFilterMinNorm)) {
      block.setZero();
    } else {
      block *= reference.values().segment(seg.offset, seg.length).norm() / n;
    }
  }
  return direction.like(std::move(out));
}

struct LandscapeGrid {
  ParamVector d1;
  ParamVector d2;
  /// Shared axis coordinates; antisymmetric, with an exact 0 at the center for odd resolutions.
  Eigen::VectorXd coords;
  /// loss(i, j) at w + coords[i] d1 + coords[j] d2.
  Eigen::MatrixXd loss;

  Index resolution() const noexcept { return coords.size(); }
};

/// resolution points spanning [-range, range] inclusive.
Eigen::VectorXd grid_coordinates(Index resolution, double range);

/// Loss over the plane spanned by the given directions (used as is).
LandscapeGrid landscape_grid(const StochasticObjective& obj, const ParamVector& w, const Batch& batch,
                             const ParamVector& d1, const ParamVector& d2, Index resolution = 51,
                             double range = 1.0, int threads = 1);

/// Two seeded Gaussian directions, filter-normalized against w.
LandscapeGrid landscape_slice(const StochasticObjective& obj, const ParamVector& w, const Batch& batch,
                              std::uint64_t seed, Index resolution = 51, double range = 1.0, int threads = 1);

}  // namespace ssam
