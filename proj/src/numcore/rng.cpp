#include "ssam/numcore/rng.hpp"

#include <cmath>

namespace ssam {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd standard_normal(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd uniform_in_ball(Rng& rng, Eigen::Index d, double radius) {
  Eigen::VectorXd dir = standard_normal(rng, d);
  double n = dir.norm();
  while (n == 0.0) {
    dir = standard_normal(rng, d);
    n = dir.norm();
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
  return dir * (r / n);
}

}  // namespace ssam
