#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>

#include "ssam/masks/sparse_mask.hpp"
#include "ssam/numcore/objective.hpp"
#include "ssam/optim/perturbation.hpp"
#include "ssam/optim/schedule.hpp"

namespace ssam {

enum class OptimizerKind { Sgd, Sam, Ssam };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer_kind(const std::string& s);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Sgd;
  double eta0 = 0.05;
  double rho0 = 0.0;
  ScheduleRule schedule = ScheduleRule::Constant;
  double momentum = 0.0;
  double weight_decay = 0.0;

  double eta_at(long t) const { return schedule_at({eta0, schedule}, t); }
  double rho_at(long t) const { return schedule_at({rho0, schedule}, t); }

  /// Full experiment-level invariants, including rho0 == 0 iff kind == sgd.
  /// Throws ConfigError naming the field.
  void validate() const;
  /// Theory preconditions for inverse-sqrt runs with a known gradient bound G:
  /// rho0 <= G eta0 (SAM) or rho0 <= G eta0 / 2 (SSAM).
  void validate_theory(double G) const;

  bool operator==(const OptimizerConfig&) const = default;
};

/// Diagnostics from the most recent step.
struct StepInfo {
  double eta = 0.0;
  double rho = 0.0;
  bool degenerate_gradient = false;
  int grad_evals = 0;
  /// Minibatch gradient at w_t (the perturbation-step gradient).
  Eigen::VectorXd first_gradient;
  /// ||rho g/||g|| - (rho g/||g||) (.) m||^2: perturbation mass removed by the mask.
  double masked_out_sq = 0.0;
};

struct OptimizerState {
  long t = 1;
  ParamVector w;
  SparseMask mask;
  ParamVector velocity;
  std::uint64_t rng_seed = 0;
  StepInfo last;
};

/// State at t = 1 with zero velocity and an all-ones mask unless one is given.
OptimizerState make_state(ParamVector w, std::uint64_t seed = 0, std::optional<SparseMask> mask = std::nullopt);

/// w <- w - eta_t (g + lambda w), through the heavy-ball buffer v <- mu v + (g + lambda w).
OptimizerState sgd_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                        const OptimizerConfig& config);
/// Perturb along the normalized batch gradient, then descend with the gradient
/// at the perturbed point on the same batch.
OptimizerState sam_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                        const OptimizerConfig& config);
/// As sam_step with the perturbation multiplied by state.mask after
/// normalization by the full gradient norm. The mask is left unchanged.
OptimizerState ssam_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                         const OptimizerConfig& config);

/// Dispatch on config.kind.
OptimizerState optimizer_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                              const OptimizerConfig& config);

}  // namespace ssam
