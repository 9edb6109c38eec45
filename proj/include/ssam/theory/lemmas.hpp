#pragma once

#include <cstdint>

#include "ssam/optim/optimizer.hpp"
#include "ssam/theory/constants.hpp"

namespace ssam {

inline constexpr double kLemmaMinGradNorm = 1e-8;
inline constexpr double kSigmaLevel = 3.0;

double lemma1_rhs(double grad_sq, double rho, const AssumptionConstants& c);
double lemma2_rhs(double grad_sq, double rho, const AssumptionConstants& c);
/// Descent bound as stated for SAM.
double lemma3_rhs(double f, double grad_sq, double eta, double rho, const AssumptionConstants& c);
/// Descent bound as stated for SSAM, given the masked-out perturbation mass ||e||^2.
double lemma5_rhs(double f, double grad_sq, double eta, double rho, double e_sq, const AssumptionConstants& c);

/// <grad f(w), grad f(w + rho grad f / ||grad f||)> >= ||grad f||^2 - rho L G at
/// n_points uniform points of the ball. Deterministic.
BoundReport verify_lemma1(const StochasticObjective& obj, const AssumptionConstants& c, double rho, long n_points,
                          std::uint64_t seed);

/// E <grad f(w), g(w + rho g / ||g||)> >= 1/2 ||grad f||^2 - L^2 rho^2 - L rho G,
/// with both stochastic gradients drawn on the same noise sample.
BoundReport verify_lemma2(const StochasticObjective& obj, const AssumptionConstants& c, double rho, long n_points,
                          long mc_reps, std::uint64_t seed);

struct DescentOptions {
  long n_points = 1000;
  /// Mask sparsity for SSAM; each state draws its own random mask.
  double sparsity = 0.5;
};

/// Expected one-step descent from random states: Lemma 3 for sgd/sam, Lemma 5
/// for ssam with ||e||^2 measured per draw. Requires eta <= 1/L.
BoundReport verify_descent(const StochasticObjective& obj, const AssumptionConstants& c, double eta, double rho,
                           OptimizerKind kind, long mc_reps, std::uint64_t seed, const DescentOptions& opts = {});

}  // namespace ssam
