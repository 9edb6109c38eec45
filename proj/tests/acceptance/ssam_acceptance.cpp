// Acceptance run: one PASS/FAIL line per criterion, each timed against its limit.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

#include "oracles.hpp"
#include "ssam/diagnostics/flops.hpp"
#include "ssam/diagnostics/lanczos.hpp"
#include "ssam/exp/commands.hpp"
#include "ssam/exp/train.hpp"
#include "ssam/masks/dynamic.hpp"
#include "ssam/masks/fisher.hpp"
#include "ssam/masks/policy.hpp"
#include "ssam/numcore/mlp.hpp"
#include "ssam/numcore/synthetic.hpp"
#include "ssam/optim/optimizer.hpp"
#include "ssam/theory/convergence.hpp"
#include "ssam/theory/lemmas.hpp"

namespace fs = std::filesystem;
using namespace ssam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

class ScratchDir {
 public:
  ScratchDir() : path_(fs::temp_directory_path() / ("ssam_acceptance_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

bool same_state(const OptimizerState& a, const OptimizerState& b) {
  return a.t == b.t && a.w == b.w && a.velocity == b.velocity;
}

Outcome recovery_identities() {
  TrigNonconvex f(12, 0.5, 2.0, 0.3);
  OptimizerConfig sam;
  sam.kind = OptimizerKind::Sam;
  sam.eta0 = 0.1;
  sam.rho0 = 0.05;
  sam.momentum = 0.5;
  sam.weight_decay = 0.01;
  sam.schedule = ScheduleRule::InverseSqrt;
  OptimizerConfig ssam = sam;
  ssam.kind = OptimizerKind::Ssam;
  OptimizerConfig sam0 = sam;
  sam0.rho0 = 0.0;
  OptimizerConfig sgd = sam0;
  sgd.kind = OptimizerKind::Sgd;

  Rng init(3);
  const ParamVector w0 = f.initial_point(init);
  OptimizerState a = make_state(w0, 1, random_mask(12, 0.0, 0));
  OptimizerState b = make_state(w0, 1), c = make_state(w0, 1), d = make_state(w0, 1);
  Rng stream_ab(11), stream_cd(11);
  long mismatches = 0;
  for (int step = 0; step < 100; ++step) {
    const Batch x = noise_batch(stream_ab, 12, 4);
    a = ssam_step(a, f, x, ssam);
    b = sam_step(b, f, x, sam);
    const Batch y = noise_batch(stream_cd, 12, 4);
    c = sam_step(c, f, y, sam0);
    d = sgd_step(d, f, y, sgd);
    mismatches += !same_state(a, b) + !same_state(c, d);
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatched states over 2x100 steps"};
}

Outcome mask_invariants() {
  Rng rng(5);
  long checks = 0, bad = 0;
  auto check = [&](const SparseMask& m, Index want) {
    ++checks;
    bad += m.popcount() != want;
  };
  for (Index d : {Index{10}, Index{101}, Index{10000}}) {
    for (double s : {0.5, 0.8, 0.9, 0.95, 0.98, 0.99}) {
      const Index want = active_count(d, s);
      const Eigen::VectorXd scores = standard_normal(rng, d).cwiseAbs();
      MaskContext ctx;
      ctx.dimension = d;
      ctx.sparsity = s;
      ctx.total_epochs = 10;
      ctx.latest_gradient = &scores;
      for (MaskKind kind : {MaskKind::Random, MaskKind::Fixed, MaskKind::Dynamic}) {
        ctx.seed = 7;
        ctx.current = nullptr;
        const SparseMask m = initial_mask(MaskPolicy{kind}, ctx);
        check(m, want);
        ctx.current = &m;
        if (auto next = maybe_regenerate(3, MaskPolicy{kind}, ctx)) check(*next, want);
      }
      check(fisher_mask({scores, 1}, s), want);
      SparseMask m = random_mask(d, s, 2);
      for (int u = 0; u < 1000; ++u) {
        MaskPolicy p{MaskKind::Dynamic};
        p.drop_criterion = static_cast<DropCriterion>(u % 3);
        const Eigen::VectorXd g = standard_normal(rng, d);
        m = drop_grow_update(m, g, u % 10, 10, p, static_cast<std::uint64_t>(u)).mask;
        check(m, want);
      }
    }
  }
  return {bad == 0, std::to_string(bad) + " cardinality violations in " + std::to_string(checks) + " masks"};
}

Outcome fisher_oracle() {
  MlpClassifier mlp(5, 6, 2);
  Rng rng(17);
  const ParamVector w = mlp.initial_point(rng);
  Batch data;
  data.num_classes = 2;
  data.inputs.resize(32, 5);
  for (Index i = 0; i < 32; ++i) {
    data.inputs.row(i) = standard_normal(rng, 5).transpose();
    data.targets.push_back(static_cast<int>(i % 2));
  }
  Eigen::VectorXd brute = Eigen::VectorXd::Zero(50);
  for (Index i = 0; i < 32; ++i) {
    Batch single;
    single.inputs = data.inputs.row(i);
    single.targets = {data.targets[static_cast<std::size_t>(i)]};
    single.num_classes = 2;
    const auto g = oracle::fd_gradient([&](const Eigen::VectorXd& x) { return -eval_loss(mlp, w.like(x), single); },
                                       w.values());
    brute += g.array().square().matrix();
  }
  brute /= 32.0;
  const auto fisher = empirical_fisher(mlp, w, data);
  double worst = 0.0;
  for (Index j = 0; j < 50; ++j)
    worst = std::max(worst, std::abs(fisher.values[j] - brute[j]) / std::max(brute[j], 1e-12));
  return {mlp.dimension() == 50 && worst < 1e-4, "max relative error " + fmt(worst)};
}

Outcome lanczos_vs_dense() {
  const Eigen::MatrixXd a = oracle::random_spd(50, 11);
  const Eigen::VectorXd dense = oracle::dense_eigenvalues_desc(a);
  auto q = std::make_shared<NoisyQuadratic>(a, 0.0);
  const auto r = lanczos_spectrum(HvpOracle(q, ParamVector(Eigen::VectorXd::Zero(50))), 5, 50, 3);
  double worst = 0.0;
  for (Index i = 0; i < 5; ++i) worst = std::max(worst, std::abs(r.eigenvalues[i] - dense[i]) / dense[i]);
  const double want_ratio = dense[0] / dense[4];
  const double ratio_err = r.ratio_1_5 ? std::abs(*r.ratio_1_5 - want_ratio) / want_ratio : INFINITY;
  return {worst < 1e-6 && ratio_err < 1e-6,
          "top-5 relative error " + fmt(worst) + ", lambda1/lambda5 relative error " + fmt(ratio_err)};
}

NoisyQuadratic acceptance_quadratic() { return NoisyQuadratic::diagonal(Eigen::VectorXd::LinSpaced(10, 0.1, 1.0), 0.1); }

Outcome lemmas_1_2() {
  const auto q = acceptance_quadratic();
  const auto c = assumption_constants(q);
  long violations = 0;
  std::string detail = "L=" + fmt(c.L) + " G=" + fmt(c.G) + " R=" + fmt(c.radius) + " sigma=" + fmt(c.sigma);
  for (double rho : {0.01, 0.05, 0.1}) {
    const auto l1 = verify_lemma1(q, c, rho, 1000, 1);
    const auto l2 = verify_lemma2(q, c, rho, 100, 10000, 2);
    violations += l1.violations + l2.violations;
    detail += "; rho=" + fmt(rho) + " margins " + fmt(l1.worst_margin) + "/" + fmt(l2.worst_margin);
  }
  const bool setup = c.L == 1.0 && c.G == 10.0 && c.radius == 10.0 && c.sigma == 0.1;
  return {setup && violations == 0, std::to_string(violations) + " violations, " + detail};
}

Outcome descent() {
  const auto q = acceptance_quadratic();
  const auto c = assumption_constants(q);
  const auto sam = verify_descent(q, c, 0.5, 0.05, OptimizerKind::Sam, 1000, 3);
  const auto ssam = verify_descent(q, c, 0.5, 0.05, OptimizerKind::Ssam, 1000, 4);
  return {sam.trials == 1000 && ssam.trials == 1000 && sam.violations == 0 && ssam.violations == 0,
          "SAM " + std::to_string(sam.violations) + " violations (margin " + fmt(sam.worst_margin) + "), SSAM " +
              std::to_string(ssam.violations) + " violations (margin " + fmt(ssam.worst_margin) + ")"};
}

Outcome theorem(OptimizerKind kind, Theorem which) {
  const auto q = acceptance_quadratic();
  const auto c = assumption_constants(q);
  ConvergenceOptions opts;
  opts.sparsity = 0.5;
  opts.mask_policy = MaskPolicy{MaskKind::Dynamic};
  opts.threads = static_cast<int>(worker_count());
  const auto trace = run_convergence(q, c, kind, 0.5, 0.05, 10000, 20, 7, opts);
  const auto report = check_bound(trace, c, which);
  std::string detail = std::to_string(report.violations) + " violating prefixes of " + std::to_string(report.trials) +
                       ", worst margin " + fmt(report.worst_margin);
  for (const auto& [k, v] : report.instantiation) detail += ", " + k + "=" + fmt(v);
  return {report.violations == 0 && report.trials == 9999, detail};
}

Outcome flops_column() {
  const double s[] = {0.5, 0.8, 0.9, 0.95, 0.98, 0.99};
  const double table[] = {1.65, 1.44, 1.36, 1.33, 1.31, 1.30};
  const CostModel m;
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(flops_estimate(m, OptimizerKind::Ssam, s[i]) - table[i]));
  const double sam = flops_estimate(m, OptimizerKind::Sam, 0.0);
  return {worst <= 0.01 + 1e-9 && std::abs(sam - 2.0) < 1e-12,
          "max deviation " + fmt(worst) + ", SAM " + fmt(sam)};
}

ExperimentConfig blobs(OptimizerKind kind, MaskKind mask, int epochs, std::uint64_t seed) {
  ExperimentConfig c;
  c.objective.family = Family::MlpClassifier;
  c.objective.hidden = 16;
  c.optimizer.kind = kind;
  c.optimizer.eta0 = 0.05;
  c.optimizer.momentum = 0.9;
  c.optimizer.rho0 = kind == OptimizerKind::Sgd ? 0.0 : 0.05;
  c.mask.policy.kind = mask;
  c.mask.sparsity = 0.5;
  c.epochs = epochs;
  c.seed = seed;
  return c;
}

void write_config(const fs::path& p, const ExperimentConfig& c) {
  std::ofstream f(p);
  f << config_to_json(c).dump(2);
}

Outcome ratio_below_zero(const ScratchDir& dir) {
  std::string detail = "fraction_below_zero";
  bool pass = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const fs::path root = dir.path() / ("ratio_" + std::to_string(seed));
    fs::create_directories(root);
    write_config(root / "cfg.json", blobs(OptimizerKind::Sam, MaskKind::Fixed, 5, seed));
    CommandOptions o;
    o.config = root / "cfg.json";
    o.out = root / "out";
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = run_command("ratio", o);
    std::cout.rdbuf(old);
    if (code != kExitOk) return {false, "ratio command exited with " + std::to_string(code)};
    std::ifstream j(root / "out" / "ratio.json");
    const double frac = nlohmann::json::parse(j).at("fraction_below_zero").get<double>();
    pass = pass && frac > 0.5;
    detail += " " + fmt(frac);
  }
  return {pass, detail};
}

Outcome generalization() {
  struct Arm {
    const char* name;
    OptimizerKind kind;
    MaskKind mask;
    double mean = 0.0;
  } arms[] = {{"SGD", OptimizerKind::Sgd, MaskKind::Fixed},
              {"SAM", OptimizerKind::Sam, MaskKind::Fixed},
              {"SSAM-F", OptimizerKind::Ssam, MaskKind::Fisher},
              {"SSAM-D", OptimizerKind::Ssam, MaskKind::Dynamic}};
  for (auto& arm : arms) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const RunRecord r = train(blobs(arm.kind, arm.mask, 10, seed));
      if (!r.ok()) return {false, std::string(arm.name) + " run failed: " + r.message};
      arm.mean += 100.0 * r.metrics.at("test_accuracy") / 3.0;
    }
  }
  const double sgd = arms[0].mean, sam = arms[1].mean, f = arms[2].mean, d = arms[3].mean;
  const bool pass = std::abs(f - sam) <= 0.5 && std::abs(d - sam) <= 0.5 && sam >= sgd - 0.2;
  std::string detail = "mean test accuracy %";
  for (const auto& arm : arms) detail += std::string(" ") + arm.name + "=" + fmt(arm.mean, 5);
  return {pass, detail};
}

std::vector<std::string> rows_without_time(const fs::path& csv) {
  std::ifstream f(csv);
  std::vector<std::string> rows;
  for (std::string line; std::getline(f, line);) rows.push_back(line.substr(0, line.rfind(',')));
  return rows;
}

Outcome determinism(const ScratchDir& dir) {
  ExperimentConfig c = blobs(OptimizerKind::Ssam, MaskKind::Dynamic, 5, 42);
  const fs::path root = dir.path() / "determinism";
  fs::create_directories(root);
  write_config(root / "cfg.json", c);
  std::vector<std::vector<std::string>> runs;
  for (const char* name : {"a", "b"}) {
    CommandOptions o;
    o.config = root / "cfg.json";
    o.out = root / name;
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = run_command("train", o);
    std::cout.rdbuf(old);
    if (code != kExitOk) return {false, "train exited with " + std::to_string(code)};
    runs.push_back(rows_without_time(root / name / "steps.csv"));
  }
  const bool pass = runs[0].size() > 1 && runs[0] == runs[1];
  return {pass, std::to_string(runs[0].size() - 1) + " rows compared"};
}

}  // namespace

int main() {
  ScratchDir scratch;
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "recovery identities", 1, recovery_identities},
      {2, "mask cardinality invariant", 10, mask_invariants},
      {3, "Fisher vs finite-difference oracle", 5, fisher_oracle},
      {4, "Lanczos vs dense eigendecomposition", 1, lanczos_vs_dense},
      {5, "Lemma 1 and Lemma 2", 30, lemmas_1_2},
      {6, "descent inequality", 60, descent},
      {7, "Theorem 1 bound", 300, [] { return theorem(OptimizerKind::Sam, Theorem::Sam); }},
      {8, "Theorem 2 bound", 300, [] { return theorem(OptimizerKind::Ssam, Theorem::Ssam); }},
      {9, "FLOPs column", 1, flops_column},
      {10, "gradient-difference ratio", 120, [&] { return ratio_below_zero(scratch); }},
      {11, "blobs generalization analogue", 300, generalization},
      {12, "determinism", 30, [&] { return determinism(scratch); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (pass ? "PASS" : "FAIL") << " - " << o.detail
              << " [" << fmt(secs, 3) << " s, limit " << fmt(c.limit_seconds) << " s"
              << (in_time ? "" : ", too slow") << "]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
