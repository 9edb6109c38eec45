#include "ssam/exp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ssam/error.hpp"
#include "ssam/masks/sparse_mask.hpp"

namespace ssam {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

/// Reads the keys of one JSON object, remembering which were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key");
    }
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError(join(path_, key), "expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (it->is_number_integer() && !it->is_number_unsigned())
            throw ConfigError(join(path_, key), "expected a non-negative integer");
        }
      }
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(join(path_, key), std::string("wrong type: ") + e.what());
    }
  }

  template <typename Parse, typename T>
  void read_enum(const std::string& key, T& out, Parse parse) {
    std::string s;
    seen_.insert(key);
    if (!j_.contains(key)) return;
    read(key, s);
    try {
      out = parse(s);
    } catch (const ConfigError& e) {
      throw ConfigError(join(path_, key), e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), join(path_, key));
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite(double x) { return std::isfinite(x); }

void read_dataset(Section s, DatasetSpec& d) {
  s.read_enum("kind", d.kind, parse_dataset_kind);
  s.read("path", d.path);
  s.read("labels_path", d.labels_path);
  s.read("classes", d.classes);
  s.read("samples", d.samples);
  s.read("features", d.features);
  s.read("separation", d.separation);
  s.read("test_fraction", d.test_fraction);
  s.finish();
}

void read_objective(Section s, ObjectiveSpec& o) {
  s.read_enum("family", o.family, parse_family);
  s.read("dimension", o.dimension);
  s.read("sigma", o.sigma);
  s.read("radius", o.radius);
  s.read("init_radius", o.init_radius);
  s.read("eigenvalues", o.eigenvalues);
  s.read("beta", o.beta);
  s.read("omega", o.omega);
  s.read("hidden", o.hidden);
  if (s.has("dataset")) read_dataset(s.child("dataset"), o.dataset);
  s.finish();
}

void read_optimizer(Section s, OptimizerConfig& o) {
  s.read_enum("kind", o.kind, parse_optimizer_kind);
  s.read("eta0", o.eta0);
  s.read("rho0", o.rho0);
  s.read_enum("schedule", o.schedule, parse_schedule_rule);
  s.read("momentum", o.momentum);
  s.read("weight_decay", o.weight_decay);
  s.finish();
}

void read_mask(Section s, MaskSpec& m) {
  s.read_enum("kind", m.policy.kind, parse_mask_kind);
  s.read("sparsity", m.sparsity);
  s.read_enum("drop_criterion", m.policy.drop_criterion, parse_drop_criterion);
  s.read("alpha", m.policy.alpha);
  s.read("update_interval", m.policy.update_interval);
  s.read("fisher_samples", m.policy.fisher_samples);
  s.finish();
}

void read_ablation(Section s, AblationSpec& a) {
  s.read("sparsity", a.sparsity);
  s.read("rho", a.rho);
  s.read("fisher_samples", a.fisher_samples);
  s.read("update_interval", a.update_interval);
  s.read("strategy", a.strategy);
  auto nonempty = [&](const std::string& key, bool empty) {
    if (s.has(key) && empty) throw ConfigError(join(s.path(), key), "grid axis must not be empty");
  };
  nonempty("sparsity", a.sparsity.empty());
  nonempty("rho", a.rho.empty());
  nonempty("fisher_samples", a.fisher_samples.empty());
  nonempty("update_interval", a.update_interval.empty());
  nonempty("strategy", a.strategy.empty());
  s.finish();
}

void resolve(std::string& path, const std::filesystem::path& base) {
  if (path.empty() || base.empty()) return;
  const std::filesystem::path p(path);
  if (p.is_relative()) path = (base / p).lexically_normal().string();
}

}  // namespace

std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Blobs:
      return "blobs";
    case DatasetKind::Csv:
      return "csv";
    case DatasetKind::Idx:
      return "idx";
  }
  return "?";
}

DatasetKind parse_dataset_kind(const std::string& s) {
  if (s == "blobs") return DatasetKind::Blobs;
  if (s == "csv") return DatasetKind::Csv;
  if (s == "idx") return DatasetKind::Idx;
  throw ConfigError("kind", "unknown dataset kind '" + s + "' (expected blobs, csv or idx)");
}

bool AblationSpec::empty() const {
  return sparsity.empty() && rho.empty() && fisher_samples.empty() && update_interval.empty() && strategy.empty();
}

std::size_t AblationSpec::cells() const {
  auto n = [](std::size_t k) { return k == 0 ? std::size_t{1} : k; };
  return n(sparsity.size()) * n(rho.size()) * n(fisher_samples.size()) * n(update_interval.size()) *
         n(strategy.size());
}

void ExperimentConfig::validate() const {
  const ObjectiveSpec& o = objective;
  const bool classifier = o.family == Family::MlpClassifier;
  if (classifier) {
    const DatasetSpec& d = o.dataset;
    check(o.hidden >= 0, "objective.hidden", "must be >= 0");
    check(d.classes >= 2, "objective.dataset.classes", "need at least two classes");
    check(d.test_fraction >= 0.0 && d.test_fraction < 1.0, "objective.dataset.test_fraction", "must lie in [0, 1)");
    if (d.kind == DatasetKind::Blobs) {
      check(d.samples >= 2, "objective.dataset.samples", "need at least two samples");
      check(d.features >= 1, "objective.dataset.features", "must be >= 1");
      check(d.separation >= 0.0 && finite(d.separation), "objective.dataset.separation", "must be finite and >= 0");
    } else {
      check(!d.path.empty(), "objective.dataset.path", "required for csv and idx datasets");
      check(std::filesystem::exists(d.path), "objective.dataset.path", "file not found: " + d.path);
      if (d.kind == DatasetKind::Idx) {
        check(!d.labels_path.empty(), "objective.dataset.labels_path", "required for idx datasets");
        check(std::filesystem::exists(d.labels_path), "objective.dataset.labels_path",
              "file not found: " + d.labels_path);
      }
    }
  } else {
    check(o.dimension >= 1, "objective.dimension", "must be >= 1");
    check(o.sigma >= 0.0 && finite(o.sigma), "objective.sigma", "must be finite and >= 0");
    check(o.radius > 0.0 && finite(o.radius), "objective.radius", "must be positive");
    check(o.init_radius > 0.0 && o.init_radius <= o.radius, "objective.init_radius", "must lie in (0, radius]");
    if (o.family == Family::NoisyQuadratic && !o.eigenvalues.empty()) {
      check(static_cast<Index>(o.eigenvalues.size()) == o.dimension, "objective.eigenvalues",
            "length must equal dimension");
      for (double e : o.eigenvalues) check(e >= 0.0 && finite(e), "objective.eigenvalues", "must be finite and >= 0");
    }
    if (o.family == Family::TrigNonconvex) {
      check(finite(o.beta), "objective.beta", "must be finite");
      check(finite(o.omega), "objective.omega", "must be finite");
    }
  }

  try {
    optimizer.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(join("optimizer", e.field()), e.what());
  }

  if (optimizer.kind == OptimizerKind::Ssam) {
    check(mask.sparsity >= 0.0 && mask.sparsity < 1.0, "mask.sparsity", "must lie in [0, 1)");
    check(mask.policy.alpha >= 0.0 && mask.policy.alpha <= 1.0, "mask.alpha", "must lie in [0, 1]");
    check(mask.policy.update_interval >= 1, "mask.update_interval", "must be >= 1");
    check(mask.policy.fisher_samples >= 1, "mask.fisher_samples", "must be >= 1");
    if (!classifier) check(mask.policy.kind != MaskKind::Fisher, "mask.kind", "Fisher masks need a classifier");
  }
  check(epochs >= 0, "epochs", "must be >= 0");
  check(batch_size >= 1, "batch_size", "must be >= 1");
  check(steps_per_epoch >= 1, "steps_per_epoch", "must be >= 1");
  check(threads >= 1, "threads", "must be >= 1");

  for (double s : ablation.sparsity) check(s >= 0.0 && s < 1.0, "ablation.sparsity", "values must lie in [0, 1)");
  for (double r : ablation.rho) check(r > 0.0 && finite(r), "ablation.rho", "values must be positive");
  for (Index n : ablation.fisher_samples) check(n >= 1, "ablation.fisher_samples", "values must be >= 1");
  for (int t : ablation.update_interval) check(t >= 1, "ablation.update_interval", "values must be >= 1");
  for (const auto& s : ablation.strategy) {
    static const std::set<std::string> known{"fisher", "random", "fixed", "dynamic-flattest", "dynamic-sharpest",
                                             "dynamic-random"};
    check(known.count(s) == 1, "ablation.strategy", "unknown strategy '" + s + "'");
  }
  if (!ablation.rho.empty()) check(optimizer.kind != OptimizerKind::Sgd, "ablation.rho", "sgd has no rho");

  check(spectrum.k >= 1 && spectrum.k <= spectrum.iters, "spectrum.k", "need 1 <= k <= iters");
  check(spectrum.batch_samples >= 1, "spectrum.batch_samples", "must be >= 1");
  check(landscape.resolution >= 2, "landscape.resolution", "must be >= 2");
  check(landscape.range > 0.0 && finite(landscape.range), "landscape.range", "must be positive");
  check(landscape.batch_samples >= 1, "landscape.batch_samples", "must be >= 1");
  check(ratio.rho > 0.0 && finite(ratio.rho), "ratio.rho", "must be positive");
  check(ratio.batch_samples >= 1, "ratio.batch_samples", "must be >= 1");
  for (double r : theory.lemma_rhos) check(r > 0.0 && finite(r), "theory.lemma_rhos", "values must be positive");
  check(theory.lemma_points >= 1, "theory.lemma_points", "must be >= 1");
  check(theory.mc_reps >= 1, "theory.mc_reps", "must be >= 1");
  check(theory.descent_eta > 0.0, "theory.descent_eta", "must be positive");
  check(theory.descent_rho >= 0.0, "theory.descent_rho", "must be >= 0");
  check(theory.descent_points >= 1, "theory.descent_points", "must be >= 1");
  check(theory.descent_reps >= 1, "theory.descent_reps", "must be >= 1");
  check(theory.steps >= 2, "theory.steps", "must be >= 2");
  check(theory.repeats >= 1, "theory.repeats", "must be >= 1");
  check(theory.steps_per_epoch >= 1, "theory.steps_per_epoch", "must be >= 1");
  check(flops.forward_fraction > 0.0 && flops.forward_fraction < 1.0, "flops.forward_fraction", "must lie in (0, 1)");
  for (double s : flops.sparsities) check(s >= 0.0 && s <= 1.0, "flops.sparsities", "values must lie in [0, 1]");
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                              ": " + e.what());
  }

  ExperimentConfig cfg;
  {
    Section root(j, "");
    if (root.has("objective")) read_objective(root.child("objective"), cfg.objective);
    if (root.has("optimizer")) read_optimizer(root.child("optimizer"), cfg.optimizer);
    if (root.has("mask")) read_mask(root.child("mask"), cfg.mask);
    root.read("epochs", cfg.epochs);
    root.read("batch_size", cfg.batch_size);
    root.read("steps_per_epoch", cfg.steps_per_epoch);
    root.read("seed", cfg.seed);
    root.read("out", cfg.out);
    root.read("threads", cfg.threads);
    if (root.has("ablation")) read_ablation(root.child("ablation"), cfg.ablation);
    if (root.has("spectrum")) {
      Section s = root.child("spectrum");
      s.read("k", cfg.spectrum.k);
      s.read("iters", cfg.spectrum.iters);
      s.read("batch_samples", cfg.spectrum.batch_samples);
      s.finish();
    }
    if (root.has("landscape")) {
      Section s = root.child("landscape");
      s.read("resolution", cfg.landscape.resolution);
      s.read("range", cfg.landscape.range);
      s.read("batch_samples", cfg.landscape.batch_samples);
      s.finish();
    }
    if (root.has("ratio")) {
      Section s = root.child("ratio");
      s.read("rho", cfg.ratio.rho);
      s.read("batch_samples", cfg.ratio.batch_samples);
      s.finish();
    }
    if (root.has("theory")) {
      Section s = root.child("theory");
      TheorySpec& t = cfg.theory;
      s.read("lemma_rhos", t.lemma_rhos);
      s.read("lemma_points", t.lemma_points);
      s.read("mc_reps", t.mc_reps);
      s.read("descent_eta", t.descent_eta);
      s.read("descent_rho", t.descent_rho);
      s.read("descent_points", t.descent_points);
      s.read("descent_reps", t.descent_reps);
      s.read("steps", t.steps);
      s.read("repeats", t.repeats);
      s.read("steps_per_epoch", t.steps_per_epoch);
      s.finish();
    }
    if (root.has("flops")) {
      Section s = root.child("flops");
      s.read("forward_fraction", cfg.flops.forward_fraction);
      s.read("sparsities", cfg.flops.sparsities);
      s.finish();
    }
    root.finish();
  }
  resolve(cfg.objective.dataset.path, base_dir);
  resolve(cfg.objective.dataset.labels_path, base_dir);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  if (f.bad()) throw IoError("cannot read config file " + path.string());
  return parse_config(buf.str(), path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
  const ObjectiveSpec& o = c.objective;
  const DatasetSpec& d = o.dataset;
  json j;
  j["objective"] = {{"family", to_string(o.family)},
                    {"dimension", o.dimension},
                    {"sigma", o.sigma},
                    {"radius", o.radius},
                    {"init_radius", o.init_radius},
                    {"eigenvalues", o.eigenvalues},
                    {"beta", o.beta},
                    {"omega", o.omega},
                    {"hidden", o.hidden},
                    {"dataset",
                     {{"kind", to_string(d.kind)},
                      {"path", d.path},
                      {"labels_path", d.labels_path},
                      {"classes", d.classes},
                      {"samples", d.samples},
                      {"features", d.features},
                      {"separation", d.separation},
                      {"test_fraction", d.test_fraction}}}};
  j["optimizer"] = {{"kind", to_string(c.optimizer.kind)},          {"eta0", c.optimizer.eta0},
                    {"rho0", c.optimizer.rho0},                     {"schedule", to_string(c.optimizer.schedule)},
                    {"momentum", c.optimizer.momentum},             {"weight_decay", c.optimizer.weight_decay}};
  j["mask"] = {{"kind", to_string(c.mask.policy.kind)},
               {"sparsity", c.mask.sparsity},
               {"drop_criterion", to_string(c.mask.policy.drop_criterion)},
               {"alpha", c.mask.policy.alpha},
               {"update_interval", c.mask.policy.update_interval},
               {"fisher_samples", c.mask.policy.fisher_samples}};
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["steps_per_epoch"] = c.steps_per_epoch;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  json ab = json::object();
  if (!c.ablation.sparsity.empty()) ab["sparsity"] = c.ablation.sparsity;
  if (!c.ablation.rho.empty()) ab["rho"] = c.ablation.rho;
  if (!c.ablation.fisher_samples.empty()) ab["fisher_samples"] = c.ablation.fisher_samples;
  if (!c.ablation.update_interval.empty()) ab["update_interval"] = c.ablation.update_interval;
  if (!c.ablation.strategy.empty()) ab["strategy"] = c.ablation.strategy;
  j["ablation"] = ab;
  j["spectrum"] = {{"k", c.spectrum.k}, {"iters", c.spectrum.iters}, {"batch_samples", c.spectrum.batch_samples}};
  j["landscape"] = {{"resolution", c.landscape.resolution},
                    {"range", c.landscape.range},
                    {"batch_samples", c.landscape.batch_samples}};
  j["ratio"] = {{"rho", c.ratio.rho}, {"batch_samples", c.ratio.batch_samples}};
  const TheorySpec& t = c.theory;
  j["theory"] = {{"lemma_rhos", t.lemma_rhos},         {"lemma_points", t.lemma_points},
                 {"mc_reps", t.mc_reps},               {"descent_eta", t.descent_eta},
                 {"descent_rho", t.descent_rho},       {"descent_points", t.descent_points},
                 {"descent_reps", t.descent_reps},     {"steps", t.steps},
                 {"repeats", t.repeats},               {"steps_per_epoch", t.steps_per_epoch}};
  j["flops"] = {{"forward_fraction", c.flops.forward_fraction}, {"sparsities", c.flops.sparsities}};
  return j;
}

}  // namespace ssam
