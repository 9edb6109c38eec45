#include "ssam/exp/commands.hpp"

#include <iostream>
#include <sstream>

#include "ssam/diagnostics/flops.hpp"
#include "ssam/diagnostics/landscape.hpp"
#include "ssam/diagnostics/lanczos.hpp"
#include "ssam/diagnostics/ratio.hpp"
#include "ssam/diagnostics/report_io.hpp"
#include "ssam/error.hpp"
#include "ssam/exp/ablation.hpp"
#include "ssam/exp/train.hpp"
#include "ssam/masks/policy.hpp"
#include "ssam/optim/perturbation.hpp"
#include "ssam/theory/lemmas.hpp"
#include "ssam/theory/report_json.hpp"

namespace ssam {
namespace {

namespace fs = std::filesystem;

enum Stream : std::uint64_t { kProbeBatch = 7, kProbe = 8 };

ExperimentConfig resolve_config(const CommandOptions& opts, bool config_optional = false) {
  ExperimentConfig cfg;
  if (opts.config) {
    cfg = load_config(*opts.config);
  } else if (!config_optional) {
    throw ConfigError("--config", "a configuration file is required");
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.threads) cfg.threads = *opts.threads;
  if (opts.out) cfg.out = opts.out->string();
  cfg.validate();
  return cfg;
}

fs::path require_out(const ExperimentConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("out", "an output directory is required (--out or \"out\")");
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out + ": " + ec.message());
  return cfg.out;
}

/// Seeded probe batch: a training-set sample for classifiers, the noiseless batch otherwise.
Batch probe_batch(const ExperimentConfig& cfg, const Problem& p, Index samples) {
  if (!p.data) return noiseless_batch(p.objective->dimension());
  Rng rng(derive_seed(cfg.seed, kProbeBatch));
  return sample_rows(p.data->train, samples, rng);
}

TrainResult trained(const ExperimentConfig& cfg, const Problem& p, const fs::path& out) {
  TrainResult r = train_problem(cfg, p);
  emit_record(r.record, out);
  if (!r.record.ok()) throw NumericalError("training failed: " + r.record.message);
  return r;
}

int cmd_train(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const RunRecord rec = train(cfg);
  emit_record(rec, out);
  std::cout << "train: " << rec.rows.size() << " steps, status " << rec.status;
  for (const auto& [k, v] : rec.metrics) std::cout << ", " << k << " " << format_double(v);
  std::cout << '\n';
  if (!rec.ok()) {
    std::cerr << "error: " << rec.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_ablate(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const AblationResult result = run_ablation(cfg, cfg.threads);
  emit_ablation(result, out);
  long failed = 0;
  for (const auto& r : result.records) failed += r.ok() ? 0 : 1;
  std::cout << "ablate: " << result.cells.size() << " cells, " << failed << " failed; summary in "
            << (out / "summary.csv").string() << '\n';
  return kExitOk;
}

int cmd_spectrum(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const Problem p = build_problem(cfg);
  const Index d = p.objective->dimension();
  if (cfg.spectrum.iters > d) throw ConfigError("spectrum.iters", "must not exceed the parameter count");
  const TrainResult r = trained(cfg, p, out);
  std::optional<Batch> batch;
  if (p.data) batch = probe_batch(cfg, p, cfg.spectrum.batch_samples);
  const HvpOracle oracle(p.objective, r.weights, batch);
  const SpectrumReport rep = lanczos_spectrum(oracle, cfg.spectrum.k, cfg.spectrum.iters, derive_seed(cfg.seed, kProbe));
  write_text_file(out / "spectrum.json", spectrum_to_json(rep) + '\n');
  std::cout << "spectrum: lambda_1 " << format_double(rep.eigenvalues[0]);
  if (rep.ratio_1_5) std::cout << ", lambda_1/lambda_5 " << format_double(*rep.ratio_1_5);
  std::cout << '\n';
  return kExitOk;
}

int cmd_landscape(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const Problem p = build_problem(cfg);
  const TrainResult r = trained(cfg, p, out);
  const Batch batch = probe_batch(cfg, p, cfg.landscape.batch_samples);
  const LandscapeGrid g = landscape_slice(*p.objective, r.weights, batch, derive_seed(cfg.seed, kProbe),
                                          cfg.landscape.resolution, cfg.landscape.range, cfg.threads);
  std::ostringstream csv;
  write_grid_csv(csv, g);
  write_text_file(out / "landscape.csv", csv.str());
  std::cout << "landscape: " << g.resolution() << "x" << g.resolution() << " grid, center loss "
            << format_double(g.loss(g.resolution() / 2, g.resolution() / 2)) << '\n';
  return kExitOk;
}

int cmd_ratio(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const Problem p = build_problem(cfg);
  const TrainResult r = trained(cfg, p, out);
  Batch batch;
  if (p.data) {
    batch = probe_batch(cfg, p, cfg.ratio.batch_samples);
  } else {
    Rng rng(derive_seed(cfg.seed, kProbeBatch));
    batch = noise_batch(rng, p.objective->dimension(), cfg.batch_size);
  }
  const ParamVector g_sgd = grad(*p.objective, r.weights, batch);
  const auto eps = compute_perturbation(g_sgd, cfg.ratio.rho);
  const ParamVector g_sam = grad(*p.objective, r.weights + eps, batch);
  const RatioHistogram h = grad_diff_ratio(g_sam, g_sgd);
  std::ostringstream csv;
  write_histogram_csv(csv, h);
  write_text_file(out / "ratio.csv", csv.str());
  write_text_file(out / "ratio.json", histogram_summary_json(h) + '\n');
  std::cout << "ratio: fraction_below_zero " << format_double(h.fraction_below_zero) << ", excluded "
            << h.excluded_count << '\n';
  return kExitOk;
}

int cmd_theory(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const fs::path out = require_out(cfg);
  const Problem p = build_problem(cfg);
  const StochasticObjective& obj = *p.objective;
  const AssumptionConstants c = assumption_constants(obj);
  const TheorySpec& t = cfg.theory;
  const OptimizerKind kind = cfg.optimizer.kind;

  std::vector<BoundReport> reports;
  for (std::size_t i = 0; i < t.lemma_rhos.size(); ++i) {
    reports.push_back(verify_lemma1(obj, c, t.lemma_rhos[i], t.lemma_points, derive_seed(cfg.seed, 10 + i)));
    reports.push_back(
        verify_lemma2(obj, c, t.lemma_rhos[i], t.lemma_points, t.mc_reps, derive_seed(cfg.seed, 20 + i)));
  }
  DescentOptions dopts;
  dopts.n_points = t.descent_points;
  dopts.sparsity = cfg.mask.sparsity;
  reports.push_back(verify_descent(obj, c, t.descent_eta, kind == OptimizerKind::Sgd ? 0.0 : t.descent_rho, kind,
                                   t.descent_reps, derive_seed(cfg.seed, 30), dopts));

  ConvergenceOptions copts;
  copts.sparsity = cfg.mask.sparsity;
  copts.mask_policy = cfg.mask.policy;
  copts.steps_per_epoch = t.steps_per_epoch;
  copts.threads = cfg.threads;
  const ConvergenceTrace trace =
      run_convergence(obj, c, kind, cfg.optimizer.eta0, cfg.optimizer.rho0, t.steps, t.repeats, cfg.seed, copts);
  reports.push_back(check_bound(trace, c, kind == OptimizerKind::Ssam ? Theorem::Ssam : Theorem::Sam));

  nlohmann::json j;
  j["constants"] = to_json(c);
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  j["trace"] = trace_summary_json(trace);
  write_text_file(out / "theory.json", j.dump(2) + '\n');
  for (const auto& r : reports)
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.inequality << " trials " << r.trials << " violations "
              << r.violations << " worst_margin " << format_double(r.worst_margin) << '\n';
  return kExitOk;
}

int cmd_flops(const CommandOptions& opts) {
  const ExperimentConfig cfg = resolve_config(opts, true);
  const CostModel model{cfg.flops.forward_fraction};
  std::string csv = "optimizer,sparsity,cost,rounded\n";
  auto row = [&](OptimizerKind k, double s) {
    const double cost = flops_estimate(model, k, s);
    csv += to_string(k) + ',' + format_double(s) + ',' + format_double(cost) + ',' + format_double(round_cost(cost)) +
           '\n';
  };
  row(OptimizerKind::Sgd, 0.0);
  row(OptimizerKind::Sam, 0.0);
  for (double s : cfg.flops.sparsities) row(OptimizerKind::Ssam, s);
  if (cfg.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(require_out(cfg) / "flops.csv", csv);
    std::cout << csv;
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::string& name, const CommandOptions& opts) {
  try {
    if (name == "train") return cmd_train(opts);
    if (name == "ablate") return cmd_ablate(opts);
    if (name == "spectrum") return cmd_spectrum(opts);
    if (name == "landscape") return cmd_landscape(opts);
    if (name == "ratio") return cmd_ratio(opts);
    if (name == "theory") return cmd_theory(opts);
    if (name == "flops") return cmd_flops(opts);
    throw ConfigError("command", "unknown subcommand '" + name + "'");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainViolation& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace ssam
