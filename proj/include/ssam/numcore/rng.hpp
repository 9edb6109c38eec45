#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace ssam {

using Rng = std::mt19937_64;

/// Independent stream seed from a base seed and a stream tag (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

Eigen::VectorXd standard_normal(Rng& rng, Eigen::Index d);

/// Uniform sample from the closed ball of the given radius centered at the origin.
Eigen::VectorXd uniform_in_ball(Rng& rng, Eigen::Index d, double radius);

}  // namespace ssam
