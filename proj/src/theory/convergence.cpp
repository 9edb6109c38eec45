#include "ssam/theory/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "ssam/error.hpp"
#include "ssam/masks/policy.hpp"

namespace ssam {
namespace {

constexpr std::uint64_t kMaskStream = 0x6d61736b;

struct RepeatRows {
  Eigen::RowVectorXd grad_sq;
  Eigen::RowVectorXd f_after;
  Eigen::RowVectorXd masked;
};

RepeatRows run_repeat(const StochasticObjective& obj, const AssumptionConstants& c, const OptimizerConfig& cfg,
                      const ParamVector& w1, long T, long repeat, std::uint64_t seed,
                      const ConvergenceOptions& opts) {
  RepeatRows rows{Eigen::RowVectorXd(T), Eigen::RowVectorXd(T), Eigen::RowVectorXd(T)};
  const Index d = obj.dimension();
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(repeat) + 1));
  const std::uint64_t mask_seed = derive_seed(seed ^ kMaskStream, static_cast<std::uint64_t>(repeat));
  const bool sparse = cfg.kind == OptimizerKind::Ssam;

  std::optional<SparseMask> mask;
  if (sparse) mask = random_mask(d, opts.sparsity, mask_seed);
  OptimizerState state = make_state(w1, derive_seed(seed, static_cast<std::uint64_t>(repeat)), mask);
  const int total_epochs = static_cast<int>((T + opts.steps_per_epoch - 1) / opts.steps_per_epoch);
  Eigen::VectorXd latest = true_grad(obj, w1).values();

  for (long t = 1; t <= T; ++t) {
    if (sparse && t > 1 && (t - 1) % opts.steps_per_epoch == 0) {
      const int epoch = static_cast<int>((t - 1) / opts.steps_per_epoch);
      MaskContext ctx;
      ctx.objective = &obj;
      ctx.weights = &state.w;
      ctx.current = &state.mask;
      ctx.latest_gradient = &latest;
      ctx.dimension = d;
      ctx.sparsity = opts.sparsity;
      ctx.total_epochs = total_epochs;
      ctx.seed = derive_seed(mask_seed, static_cast<std::uint64_t>(epoch));
      if (auto fresh = maybe_regenerate(epoch, opts.mask_policy, ctx)) state.mask = std::move(*fresh);
    }
    rows.grad_sq[t - 1] = true_grad(obj, state.w).squared_norm();
    state = optimizer_step(state, obj, noise_batch(rng, d), cfg);
    if (state.w.norm() > c.radius) {
      throw DomainViolation("iterate left the ball of radius " + std::to_string(c.radius) + " at step " +
                            std::to_string(t) + " of repeat " + std::to_string(repeat) +
                            "; the gradient bound G no longer applies");
    }
    rows.f_after[t - 1] = true_loss(obj, state.w);
    rows.masked[t - 1] = state.last.masked_out_sq;
    latest = state.last.first_gradient;
  }
  return rows;
}

}  // namespace

Eigen::VectorXd ConvergenceTrace::mean_grad_sq() const { return grad_sq.colwise().mean().transpose(); }

ConvergenceTrace run_convergence(const StochasticObjective& obj, const AssumptionConstants& c, OptimizerKind kind,
                                 double eta0, double rho0, long T, long repeats, std::uint64_t seed,
                                 const ConvergenceOptions& opts) {
  c.validate();
  if (T < 1) throw InvalidArgument("convergence run needs T >= 1");
  if (repeats < 1) throw InvalidArgument("convergence run needs repeats >= 1");
  if (opts.steps_per_epoch < 1) throw ConfigError("steps_per_epoch", "must be >= 1");
  if (!(eta0 > 0.0) || eta0 > 1.0 / c.L) throw ConfigError("eta0", "theory runs need 0 < eta0 <= 1/L");

  OptimizerConfig cfg;
  cfg.kind = kind;
  cfg.eta0 = eta0;
  cfg.rho0 = rho0;
  cfg.schedule = ScheduleRule::InverseSqrt;
  if (kind == OptimizerKind::Sgd && rho0 != 0.0) throw ConfigError("rho0", "sgd has no perturbation");
  if (rho0 < 0.0) throw ConfigError("rho0", "must be non-negative");
  cfg.validate_theory(c.G);
  if (kind == OptimizerKind::Ssam) {
    validate_sparsity(opts.sparsity);
    opts.mask_policy.validate();
    if (opts.mask_policy.kind == MaskKind::Fisher)
      throw ConfigError("mask_policy", "Fisher masks need a classifier objective");
  }

  Rng init_rng(seed);
  const ParamVector w1 = obj.initial_point(init_rng);
  if (w1.norm() > c.radius) throw DomainViolation("initial point lies outside the working ball");

  ConvergenceTrace trace;
  trace.config = cfg;
  trace.grad_sq.resize(repeats, T);
  trace.f_after.resize(repeats, T);
  trace.masked_out_sq.resize(repeats, T);
  trace.eta.resize(T);
  trace.rho.resize(T);
  for (long t = 1; t <= T; ++t) {
    trace.eta[t - 1] = cfg.eta_at(t);
    trace.rho[t - 1] = cfg.rho_at(t);
  }
  trace.f_initial = true_loss(obj, w1);

  auto one = [&](long r) {
    RepeatRows rows = run_repeat(obj, c, cfg, w1, T, r, seed, opts);
    trace.grad_sq.row(r) = rows.grad_sq;
    trace.f_after.row(r) = rows.f_after;
    trace.masked_out_sq.row(r) = rows.masked;
  };
  const long workers = std::clamp<long>(opts.threads, 1, repeats);
  if (workers == 1) {
    for (long r = 0; r < repeats; ++r) one(r);
    return trace;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(repeats));
  std::vector<std::thread> pool;
  for (long k = 0; k < workers; ++k) {
    pool.emplace_back([&, k] {
      for (long r = k; r < repeats; r += workers) {
        try {
          one(r);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return trace;
}

std::string to_string(Theorem t) { return t == Theorem::Sam ? "theorem1" : "theorem2"; }

Theorem parse_theorem(const std::string& s) {
  if (s == "theorem1") return Theorem::Sam;
  if (s == "theorem2") return Theorem::Ssam;
  throw ConfigError("theorem", "expected theorem1 or theorem2, got '" + s + "'");
}

double theorem1_c2(const AssumptionConstants& c, double eta0, double rho0) {
  return 2.0 * (c.L * c.sigma * c.sigma * eta0 + c.L * c.G * rho0);
}

double theorem2_c4(const AssumptionConstants& c, double eta0, double rho0) {
  return 2.0 * (c.L * c.sigma * c.sigma * eta0 + c.L * c.G * rho0);
}

double theorem1_c1(double f_initial, double expected_final, double eta0) {
  return 2.0 / eta0 * (f_initial - expected_final);
}

double theorem2_c3(double f_initial, double expected_final, const AssumptionConstants& c, double eta0, double rho0) {
  const double series = std::numbers::pi * std::numbers::pi / 6.0;
  return 2.0 / eta0 *
         (f_initial - expected_final + eta0 * c.L * c.L * rho0 * rho0 * (1.0 + eta0 * c.L) * series);
}

BoundReport check_bound(const ConvergenceTrace& trace, const AssumptionConstants& c, Theorem which) {
  c.validate();
  const OptimizerConfig& cfg = trace.config;
  if (cfg.schedule != ScheduleRule::InverseSqrt) throw ConfigError("schedule", "bounds assume inverse-sqrt schedules");
  if (which == Theorem::Sam && cfg.kind == OptimizerKind::Ssam)
    throw ConfigError("kind", "theorem1 applies to sgd/sam traces");
  if (which == Theorem::Ssam && cfg.kind != OptimizerKind::Ssam)
    throw ConfigError("kind", "theorem2 applies to ssam traces");

  const long T = trace.steps();
  const long R = trace.repeats();
  const double eta0 = cfg.eta0, rho0 = cfg.rho0;
  const double slope = which == Theorem::Sam ? theorem1_c2(c, eta0, rho0) : theorem2_c4(c, eta0, rho0);

  BoundReport report;
  report.inequality = to_string(which);
  report.worst_margin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd running = Eigen::VectorXd::Zero(R);
  Eigen::VectorXd diff(R);
  for (long t = 1; t <= T; ++t) {
    running += trace.grad_sq.col(t - 1);
    if (t < 2) continue;
    const double sqrt_t = std::sqrt(static_cast<double>(t));
    for (long r = 0; r < R; ++r) {
      const double f_final = trace.f_after(r, t - 1);
      const double lead = which == Theorem::Sam ? theorem1_c1(trace.f_initial, f_final, eta0)
                                                : theorem2_c3(trace.f_initial, f_final, c, eta0, rho0);
      const double bound = lead / sqrt_t + slope * std::log(static_cast<double>(t)) / sqrt_t;
      diff[r] = bound - running[r] / static_cast<double>(t);
    }
    const double mean = diff.mean();
    const double se = R < 2 ? 0.0 : std::sqrt((diff.array() - mean).square().sum() / double(R - 1) / double(R));
    ++report.trials;
    if (mean < -3.0 * se) ++report.violations;
    if (mean < report.worst_margin) {
      report.worst_margin = mean;
      report.mc_stderr = se;
      report.extra["worst_prefix"] = static_cast<double>(t);
    }
  }
  if (report.trials == 0) report.worst_margin = 0.0;
  report.instantiation = {{"L", c.L},       {"G", c.G},       {"sigma", c.sigma},
                          {"radius", c.radius}, {"eta0", eta0}, {"rho0", rho0},
                          {"T", double(T)}, {"repeats", double(R)}, {"f_initial", trace.f_initial}};
  report.instantiation[which == Theorem::Sam ? "C2" : "C4"] = slope;
  const double ef_final = trace.f_after.col(T - 1).mean();
  report.instantiation[which == Theorem::Sam ? "C1" : "C3"] =
      which == Theorem::Sam ? theorem1_c1(trace.f_initial, ef_final, eta0)
                            : theorem2_c3(trace.f_initial, ef_final, c, eta0, rho0);
  return report;
}

}  // namespace ssam
