#pragma once

#include <Eigen/Core>

#include <vector>

#include "ssam/numcore/param_vector.hpp"

namespace ssam {

inline constexpr double kRatioClamp = 40.0;
inline constexpr int kRatioBins = 80;
inline constexpr double kRatioMinDenominator = 1e-12;

/// Histogram of r_i = log10 |(a_i - b_i) / b_i| over uniform bins on [-40, 40].
/// The last bin is closed on the right.
struct RatioHistogram {
  std::vector<double> edges;
  std::vector<Index> counts;
  double fraction_below_zero = 0.0;
  Index excluded_count = 0;
  /// r for every included coordinate, in coordinate order.
  std::vector<double> values;

  Index included() const;
};

/// Relative difference between the SAM and SGD gradients. Coordinates with
/// |g_sgd| < 1e-12 are excluded. Throws ConfigError on a length mismatch.
RatioHistogram grad_diff_ratio(const ParamVector& g_sam, const ParamVector& g_sgd);
RatioHistogram grad_diff_ratio(const Eigen::VectorXd& g_sam, const Eigen::VectorXd& g_sgd);

}  // namespace ssam
