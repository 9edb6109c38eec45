#include "ssam/theory/lemmas.hpp"

#include <cmath>
#include <limits>

#include "ssam/error.hpp"
#include "ssam/masks/fisher.hpp"
#include "ssam/optim/perturbation.hpp"

namespace ssam {
namespace {

struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double stderr_of_mean() const {
    return n < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

class Tally {
 public:
  explicit Tally(std::string name) { report_.inequality = std::move(name); }

  void deterministic(double margin) {
    ++report_.trials;
    if (margin < 0.0) ++report_.violations;
    if (margin < worst_) worst_ = margin;
  }

  void monte_carlo(double margin, double se) {
    ++report_.trials;
    if (margin < -kSigmaLevel * se) ++report_.violations;
    if (margin < worst_) {
      worst_ = margin;
      report_.mc_stderr = se;
    }
  }

  BoundReport finish(std::map<std::string, double> inst) {
    report_.worst_margin = report_.trials == 0 ? 0.0 : worst_;
    report_.instantiation = std::move(inst);
    return std::move(report_);
  }

  BoundReport& report() { return report_; }

 private:
  BoundReport report_;
  double worst_ = std::numeric_limits<double>::infinity();
};

void require_synthetic(const StochasticObjective& obj) {
  if (!obj.is_synthetic()) throw UnsupportedOperation("lemma checks need an objective with known constants");
}

/// A uniform point of the ball whose gradient is not negligible.
ParamVector draw_point(const StochasticObjective& obj, const AssumptionConstants& c, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ParamVector w(uniform_in_ball(rng, obj.dimension(), c.radius), obj.partition());
    if (true_grad(obj, w).norm() > kLemmaMinGradNorm) return w;
  }
  throw NumericalError("could not draw a point with a nonzero gradient");
}

std::map<std::string, double> echo(const AssumptionConstants& c, std::map<std::string, double> more) {
  more["L"] = c.L;
  more["G"] = c.G;
  more["sigma"] = c.sigma;
  more["radius"] = c.radius;
  return more;
}

}  // namespace

double lemma1_rhs(double grad_sq, double rho, const AssumptionConstants& c) { return grad_sq - rho * c.L * c.G; }

double lemma2_rhs(double grad_sq, double rho, const AssumptionConstants& c) {
  return 0.5 * grad_sq - c.L * c.L * rho * rho - c.L * rho * c.G;
}

double lemma3_rhs(double f, double grad_sq, double eta, double rho, const AssumptionConstants& c) {
  const double L = c.L;
  return f - 0.5 * eta * grad_sq + L * eta * eta * c.sigma * c.sigma + eta * L * L * rho * rho +
         (1.0 - L * eta) * eta * L * c.G * rho;
}

double lemma5_rhs(double f, double grad_sq, double eta, double rho, double e_sq, const AssumptionConstants& c) {
  const double L = c.L;
  return f - 0.5 * eta * grad_sq + L * eta * eta * c.sigma * c.sigma + 2.0 * eta * L * L * rho * rho +
         (1.0 - L * eta) * eta * L * c.G * rho + (1.0 + L * eta) * eta * L * L * e_sq;
}

BoundReport verify_lemma1(const StochasticObjective& obj, const AssumptionConstants& c, double rho, long n_points,
                          std::uint64_t seed) {
  require_synthetic(obj);
  c.validate();
  if (!(rho > 0.0)) throw InvalidArgument("lemma 1 needs rho > 0");
  Rng rng(seed);
  Tally tally("lemma1");
  for (long i = 0; i < n_points; ++i) {
    const ParamVector w = draw_point(obj, c, rng);
    const Eigen::VectorXd gf = true_grad(obj, w).values();
    const double grad_sq = gf.squaredNorm();
    const ParamVector ahead = w.like(w.values() + gf * (rho / gf.norm()));
    const double lhs = gf.dot(true_grad(obj, ahead).values());
    tally.deterministic(lhs - lemma1_rhs(grad_sq, rho, c));
  }
  return tally.finish(echo(c, {{"rho", rho}}));
}

BoundReport verify_lemma2(const StochasticObjective& obj, const AssumptionConstants& c, double rho, long n_points,
                          long mc_reps, std::uint64_t seed) {
  require_synthetic(obj);
  c.validate();
  if (!(rho > 0.0)) throw InvalidArgument("lemma 2 needs rho > 0");
  if (mc_reps < 1) throw InvalidArgument("lemma 2 needs mc_reps >= 1");
  Rng rng(seed);
  const Index d = obj.dimension();
  Tally tally("lemma2");
  for (long i = 0; i < n_points; ++i) {
    const ParamVector w = draw_point(obj, c, rng);
    const Eigen::VectorXd gf = true_grad(obj, w).values();
    RunningStats stats;
    for (long r = 0; r < mc_reps; ++r) {
      const Batch batch = noise_batch(rng, d);
      const Eigen::VectorXd g1 = grad(obj, w, batch).values();
      const auto eps = compute_perturbation(g1, rho);
      stats.push(gf.dot(grad(obj, w.like(w.values() + eps.epsilon), batch).values()));
    }
    tally.monte_carlo(stats.mean - lemma2_rhs(gf.squaredNorm(), rho, c), stats.stderr_of_mean());
  }
  return tally.finish(echo(c, {{"rho", rho}, {"mc_reps", static_cast<double>(mc_reps)}}));
}

BoundReport verify_descent(const StochasticObjective& obj, const AssumptionConstants& c, double eta, double rho,
                           OptimizerKind kind, long mc_reps, std::uint64_t seed, const DescentOptions& opts) {
  require_synthetic(obj);
  c.validate();
  if (!(eta > 0.0) || eta > 1.0 / c.L) throw ConfigError("eta", "descent lemmas need 0 < eta <= 1/L");
  if (rho < 0.0) throw ConfigError("rho", "must be non-negative");
  if (kind == OptimizerKind::Sgd && rho != 0.0) throw ConfigError("rho", "sgd has no perturbation");
  if (mc_reps < 1) throw InvalidArgument("descent check needs mc_reps >= 1");
  const bool sparse = kind == OptimizerKind::Ssam;
  if (sparse) validate_sparsity(opts.sparsity);

  OptimizerConfig cfg;
  cfg.kind = kind;
  cfg.eta0 = eta;
  cfg.rho0 = rho;

  Rng rng(seed);
  const Index d = obj.dimension();
  Tally tally(sparse ? "lemma5" : "lemma3");
  double worst_doubled = std::numeric_limits<double>::infinity();
  double worst_e_sq = 0.0;
  for (long i = 0; i < opts.n_points; ++i) {
    const ParamVector w = draw_point(obj, c, rng);
    const double f = true_loss(obj, w);
    const double grad_sq = true_grad(obj, w).squared_norm();
    std::optional<SparseMask> mask;
    if (sparse) mask = random_mask(d, opts.sparsity, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const OptimizerState start = make_state(w, 0, mask);
    RunningStats stats, doubled;
    for (long r = 0; r < mc_reps; ++r) {
      const OptimizerState next = optimizer_step(start, obj, noise_batch(rng, d), cfg);
      const double f_next = true_loss(obj, next.w);
      const double e_sq = next.last.masked_out_sq;
      worst_e_sq = std::max(worst_e_sq, e_sq);
      if (sparse) {
        stats.push(lemma5_rhs(f, grad_sq, eta, rho, e_sq, c) - f_next);
      } else {
        stats.push(lemma3_rhs(f, grad_sq, eta, rho, c) - f_next);
        doubled.push(lemma5_rhs(f, grad_sq, eta, rho, 0.0, c) - f_next);
      }
    }
    tally.monte_carlo(stats.mean, stats.stderr_of_mean());
    if (!sparse) worst_doubled = std::min(worst_doubled, doubled.mean);
  }
  auto inst = echo(c, {{"eta", eta}, {"rho", rho}, {"mc_reps", static_cast<double>(mc_reps)}});
  if (sparse) inst["sparsity"] = opts.sparsity;
  BoundReport out = tally.finish(std::move(inst));
  if (!sparse && opts.n_points > 0) out.extra["worst_margin_doubled_rho_sq"] = worst_doubled;
  if (sparse) out.extra["max_e_sq"] = worst_e_sq;
  return out;
}

}  // namespace ssam
