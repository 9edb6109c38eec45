#include "ssam/diagnostics/ratio.hpp"

#include <algorithm>
#include <cmath>

#include "ssam/error.hpp"

namespace ssam {

Index RatioHistogram::included() const {
  Index n = 0;
  for (Index c : counts) n += c;
  return n;
}

RatioHistogram grad_diff_ratio(const Eigen::VectorXd& g_sam, const Eigen::VectorXd& g_sgd) {
  if (g_sam.size() != g_sgd.size()) throw ConfigError("g_sam", "grad_diff_ratio: length mismatch");
  RatioHistogram h;
  const double width = 2.0 * kRatioClamp / kRatioBins;
  h.edges.resize(kRatioBins + 1);
  for (int b = 0; b <= kRatioBins; ++b) h.edges[static_cast<std::size_t>(b)] = -kRatioClamp + b * width;
  h.counts.assign(kRatioBins, 0);

  Index below = 0;
  for (Index i = 0; i < g_sam.size(); ++i) {
    if (std::abs(g_sgd[i]) < kRatioMinDenominator) {
      ++h.excluded_count;
      continue;
    }
    double r = std::log10(std::abs((g_sam[i] - g_sgd[i]) / g_sgd[i]));
    r = std::clamp(r, -kRatioClamp, kRatioClamp);
    h.values.push_back(r);
    if (r < 0.0) ++below;
    const int bin = std::min(kRatioBins - 1, static_cast<int>(std::floor((r + kRatioClamp) / width)));
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  const auto n = static_cast<Index>(h.values.size());
  h.fraction_below_zero = n == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(n);
  return h;
}

RatioHistogram grad_diff_ratio(const ParamVector& g_sam, const ParamVector& g_sgd) {
  return grad_diff_ratio(g_sam.values(), g_sgd.values());
}

}  // namespace ssam
