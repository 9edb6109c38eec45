#include <cmath>

#include "ssam/optim/optimizer.hpp"

namespace ssam {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Sam: return "sam";
    case OptimizerKind::Ssam: return "ssam";
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "sam") return OptimizerKind::Sam;
  if (s == "ssam") return OptimizerKind::Ssam;
  throw ConfigError("kind", "unknown optimizer '" + s + "'");
}

void OptimizerConfig::validate() const {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ConfigError("eta0", "learning rate must be positive");
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) throw ConfigError("rho0", "perturbation radius must be nonnegative");
  if ((rho0 == 0.0) != (kind == OptimizerKind::Sgd)) {
    throw ConfigError("rho0", "rho0 must be zero exactly when the optimizer is sgd");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum", "momentum must lie in [0, 1)");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay", "weight decay must be nonnegative");
}

void OptimizerConfig::validate_theory(double G) const {
  if (schedule != ScheduleRule::InverseSqrt) return;
  if (kind == OptimizerKind::Sam && rho0 > G * eta0) throw ConfigError("rho0", "theory runs need rho0 <= G eta0");
  if (kind == OptimizerKind::Ssam && rho0 > G * eta0 / 2.0) {
    throw ConfigError("rho0", "theory runs need rho0 <= G eta0 / 2");
  }
}

OptimizerState make_state(ParamVector w, std::uint64_t seed, std::optional<SparseMask> mask) {
  OptimizerState s;
  s.velocity = ParamVector::zeros(w.partition_ptr());
  s.mask = mask ? std::move(*mask) : SparseMask::ones(w.size());
  if (s.mask.size() != w.size()) throw ConfigError("mask", "mask length does not match weight length");
  s.w = std::move(w);
  s.rng_seed = seed;
  return s;
}

namespace {

void check_common(const OptimizerState& state, const OptimizerConfig& config) {
  if (!(config.eta0 > 0.0)) throw ConfigError("eta0", "learning rate must be positive");
  if (!(config.rho0 >= 0.0)) throw ConfigError("rho0", "perturbation radius must be nonnegative");
  if (state.mask.size() != state.w.size()) throw ConfigError("mask", "mask length does not match weight length");
}

void require_kind(const OptimizerConfig& config, OptimizerKind kind) {
  if (config.kind != kind) {
    throw ConfigError("kind", "step for " + to_string(kind) + " called with a " + to_string(config.kind) + " config");
  }
}

// Shared update: w <- w - eta (v), v <- mu v + (g + lambda w).
OptimizerState apply_update(const OptimizerState& state, const ParamVector& g, const OptimizerConfig& config,
                            StepInfo info) {
  OptimizerState next;
  const Eigen::VectorXd direction = g.values() + config.weight_decay * state.w.values();
  const Eigen::VectorXd v = config.momentum * state.velocity.values() + direction;
  const Eigen::VectorXd w = state.w.values() - info.eta * v;
  if (!w.allFinite() || !v.allFinite()) {
    throw NumericalError("non-finite update", first_nonfinite_group(w, state.w.partition()).value_or(""));
  }
  next.t = state.t + 1;
  next.w = state.w.like(w);
  next.velocity = state.w.like(v);
  next.mask = state.mask;
  next.rng_seed = state.rng_seed;
  next.last = std::move(info);
  return next;
}

OptimizerState perturbed_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                              const OptimizerConfig& config, bool use_mask) {
  check_common(state, config);
  StepInfo info;
  info.eta = config.eta_at(state.t);
  info.rho = config.rho_at(state.t);
  const ParamVector g1 = grad(obj, state.w, batch);
  const auto p = compute_perturbation(g1.values(), info.rho);
  info.degenerate_gradient = p.degenerate;
  Eigen::VectorXd eps = p.epsilon;
  if (use_mask) {
    eps = state.mask.apply(p.epsilon);
    info.masked_out_sq = (p.epsilon - eps).squaredNorm();
  }
  const ParamVector g2 = grad(obj, state.w.like(state.w.values() + eps), batch);
  info.grad_evals = 2;
  info.first_gradient = g1.values();
  return apply_update(state, g2, config, std::move(info));
}

}  // namespace

OptimizerState sgd_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                        const OptimizerConfig& config) {
  require_kind(config, OptimizerKind::Sgd);
  check_common(state, config);
  StepInfo info;
  info.eta = config.eta_at(state.t);
  const ParamVector g = grad(obj, state.w, batch);
  info.grad_evals = 1;
  info.first_gradient = g.values();
  return apply_update(state, g, config, std::move(info));
}

OptimizerState sam_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                        const OptimizerConfig& config) {
  require_kind(config, OptimizerKind::Sam);
  return perturbed_step(state, obj, batch, config, false);
}

OptimizerState ssam_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                         const OptimizerConfig& config) {
  require_kind(config, OptimizerKind::Ssam);
  return perturbed_step(state, obj, batch, config, true);
}

OptimizerState optimizer_step(const OptimizerState& state, const StochasticObjective& obj, const Batch& batch,
                              const OptimizerConfig& config) {
  switch (config.kind) {
    case OptimizerKind::Sgd: return sgd_step(state, obj, batch, config);
    case OptimizerKind::Sam: return sam_step(state, obj, batch, config);
    case OptimizerKind::Ssam: return ssam_step(state, obj, batch, config);
  }
  throw ConfigError("kind", "unknown optimizer");
}

}  // namespace ssam
