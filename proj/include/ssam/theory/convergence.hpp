#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "ssam/masks/dynamic.hpp"
#include "ssam/optim/optimizer.hpp"
#include "ssam/theory/constants.hpp"

namespace ssam {

struct ConvergenceOptions {
  /// SSAM only.
  double sparsity = 0.5;
  MaskPolicy mask_policy{MaskKind::Dynamic};
  /// Length of a mask "epoch" in steps.
  long steps_per_epoch = 100;
  int threads = 1;
};

/// Per-repeat trajectories of a theory run. Row r is repeat r; column t-1 is step t.
struct ConvergenceTrace {
  OptimizerConfig config;
  /// ||grad f(w_t)||^2, t = 1..T.
  Eigen::MatrixXd grad_sq;
  /// f(w_{t+1}), the population loss after step t.
  Eigen::MatrixXd f_after;
  /// ||e_t||^2 (SSAM) and zero otherwise.
  Eigen::MatrixXd masked_out_sq;
  Eigen::VectorXd eta;
  Eigen::VectorXd rho;
  /// f(w_1), shared by every repeat.
  double f_initial = 0.0;

  long steps() const noexcept { return grad_sq.cols(); }
  long repeats() const noexcept { return grad_sq.rows(); }
  /// Repeat-averaged ||grad f(w_t)||^2.
  Eigen::VectorXd mean_grad_sq() const;
};

/// Runs the inverse-sqrt iteration T steps from one seeded initial point,
/// `repeats` times with independent noise. Throws InvalidArgument when the
/// step-size or radius preconditions fail and DomainViolation if an iterate
/// leaves the working ball.
ConvergenceTrace run_convergence(const StochasticObjective& obj, const AssumptionConstants& c, OptimizerKind kind,
                                 double eta0, double rho0, long T, long repeats, std::uint64_t seed,
                                 const ConvergenceOptions& opts = {});

enum class Theorem { Sam, Ssam };

std::string to_string(Theorem t);
Theorem parse_theorem(const std::string& s);

/// C2 of the SAM rate and C4 of the SSAM rate: 2 (L sigma^2 eta0 + L G rho0).
double theorem1_c2(const AssumptionConstants& c, double eta0, double rho0);
double theorem2_c4(const AssumptionConstants& c, double eta0, double rho0);
/// C1 = (2 / eta0) (f(w_1) - E f(w_T)).
double theorem1_c1(double f_initial, double expected_final, double eta0);
/// C3 = (2 / eta0) (f(w_1) - E f(w_T) + eta0 L^2 rho0^2 (1 + eta0 L) pi^2 / 6).
double theorem2_c3(double f_initial, double expected_final, const AssumptionConstants& c, double eta0, double rho0);

/// Checks (1/T) sum_t E||grad f(w_t)||^2 <= C/sqrt(T) + C' log(T)/sqrt(T) at every
/// prefix T >= 2. The per-repeat difference is averaged; a prefix fails when
/// its mean exceeds 3 standard errors. Throws ConfigError if the trace does
/// not come from the matching optimizer with inverse-sqrt schedules.
BoundReport check_bound(const ConvergenceTrace& trace, const AssumptionConstants& c, Theorem which);

}  // namespace ssam
