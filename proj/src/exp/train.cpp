#include "ssam/exp/train.hpp"

#include <chrono>
#include <numeric>

#include "ssam/error.hpp"
#include "ssam/masks/policy.hpp"
#include "ssam/numcore/mlp.hpp"
#include "ssam/numcore/synthetic.hpp"

namespace ssam {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

enum Stream : std::uint64_t { kInit = 1, kShuffle = 2, kMask = 3, kNoise = 4 };

}  // namespace

Problem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  const ObjectiveSpec& o = cfg.objective;
  Problem p;
  switch (o.family) {
    case Family::NoisyQuadratic: {
      Eigen::VectorXd eig = o.eigenvalues.empty()
                                ? Eigen::VectorXd::LinSpaced(o.dimension, 0.1, 1.0)
                                : Eigen::Map<const Eigen::VectorXd>(o.eigenvalues.data(), o.dimension).eval();
      p.objective = std::make_shared<NoisyQuadratic>(NoisyQuadratic::diagonal(eig, o.sigma, o.radius, o.init_radius));
      break;
    }
    case Family::TrigNonconvex:
      p.objective = std::make_shared<TrigNonconvex>(o.dimension, o.beta, o.omega, o.sigma, o.radius, o.init_radius);
      break;
    case Family::MlpClassifier: {
      p.data = load_dataset(o.dataset, cfg.seed);
      p.objective = std::make_shared<MlpClassifier>(p.data->train.features(), o.hidden, o.dataset.classes);
      break;
    }
  }
  return p;
}

TrainResult train_problem(const ExperimentConfig& cfg, const Problem& problem) {
  cfg.validate();
  const StochasticObjective& obj = *problem.objective;
  const bool classifier = obj.is_classifier();
  if (classifier && !problem.data) throw ConfigError("objective.dataset", "classifier runs need a dataset");
  const Batch* train_set = classifier ? &problem.data->train : nullptr;
  const bool sparse = cfg.optimizer.kind == OptimizerKind::Ssam;
  const Index d = obj.dimension();
  const std::uint64_t seed = cfg.seed;

  RunRecord rec;
  rec.config = cfg;
  Rng init_rng(derive_seed(seed, kInit));
  Rng shuffle_rng(derive_seed(seed, kShuffle));
  Rng noise_rng(derive_seed(seed, kNoise));
  const std::uint64_t mask_seed = derive_seed(seed, kMask);
  const ParamVector w0 = obj.initial_point(init_rng);

  MaskContext ctx;
  ctx.objective = &obj;
  ctx.training_set = train_set;
  ctx.dimension = d;
  ctx.sparsity = cfg.mask.sparsity;
  ctx.total_epochs = std::max(cfg.epochs, 1);

  OptimizerState state;
  Eigen::VectorXd latest = Eigen::VectorXd::Zero(d);
  try {
    std::optional<SparseMask> mask;
    if (sparse) {
      ctx.weights = &w0;
      ctx.seed = derive_seed(mask_seed, 0);
      const auto t0 = Clock::now();
      mask = initial_mask(cfg.mask.policy, ctx);
      rec.mask_time_ms += ms_since(t0);
      ++rec.mask_generations;
    }
    state = make_state(w0, seed, std::move(mask));
    if (!classifier) rec.metrics["initial_loss"] = true_loss(obj, w0);

    std::vector<Index> order;
    if (classifier) {
      order.resize(static_cast<std::size_t>(train_set->samples()));
      std::iota(order.begin(), order.end(), Index{0});
    }
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      bool regen = sparse && epoch == 0;
      if (sparse && epoch > 0) {
        ctx.weights = &state.w;
        ctx.current = &state.mask;
        ctx.latest_gradient = &latest;
        ctx.seed = derive_seed(mask_seed, static_cast<std::uint64_t>(epoch));
        const auto t0 = Clock::now();
        if (auto fresh = maybe_regenerate(epoch, cfg.mask.policy, ctx)) {
          rec.mask_time_ms += ms_since(t0);
          ++rec.mask_generations;
          state.mask = std::move(*fresh);
          regen = true;
        }
      }

      std::vector<Batch> batches;
      if (classifier) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
          const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
          batches.push_back(take_rows(*train_set, std::vector<Index>(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                                     order.begin() + static_cast<std::ptrdiff_t>(stop))));
        }
      } else {
        for (Index k = 0; k < cfg.steps_per_epoch; ++k) batches.push_back(noise_batch(noise_rng, d, cfg.batch_size));
      }

      for (const Batch& batch : batches) {
        const auto t0 = Clock::now();
        StepRow row;
        row.step = state.t;
        row.epoch = epoch;
        row.loss = eval_loss(obj, state.w, batch);
        state = optimizer_step(state, obj, batch, cfg.optimizer);
        row.wall_ms = ms_since(t0);
        row.grad_norm_sq = state.last.first_gradient.squaredNorm();
        row.rho_t = state.last.rho;
        row.eta_t = state.last.eta;
        row.sparsity = sparse ? state.mask.sparsity() : 0.0;
        row.mask_regen = regen;
        regen = false;
        rec.grad_evals += state.last.grad_evals;
        latest = state.last.first_gradient;
        rec.rows.push_back(row);
      }
    }

    if (classifier) {
      const StochasticObjective* base = &obj;
      while (const auto* counting = dynamic_cast<const CountingObjective*>(base)) base = counting->inner().get();
      const auto& mlp = dynamic_cast<const MlpClassifier&>(*base);
      rec.metrics["train_loss"] = eval_loss(obj, state.w, *train_set);
      rec.metrics["train_accuracy"] = mlp.accuracy(state.w.values(), *train_set);
      if (problem.data->test.samples() > 0) {
        rec.metrics["test_loss"] = eval_loss(obj, state.w, problem.data->test);
        rec.metrics["test_accuracy"] = mlp.accuracy(state.w.values(), problem.data->test);
      }
    } else {
      rec.metrics["final_loss"] = true_loss(obj, state.w);
      rec.metrics["final_grad_norm_sq"] = true_grad(obj, state.w).squared_norm();
    }
  } catch (const NumericalError& e) {
    rec.status = "numerical_failure";
    rec.message = e.what();
  }
  if (sparse && state.mask.size() == d) rec.final_mask = state.mask;
  return {std::move(rec), state.w.size() == d ? state.w : w0};
}

RunRecord train(const ExperimentConfig& cfg) { return train_problem(cfg, build_problem(cfg)).record; }

}  // namespace ssam
