#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssam/masks/dynamic.hpp"
#include "ssam/numcore/objective.hpp"
#include "ssam/optim/optimizer.hpp"

namespace ssam {

enum class DatasetKind { Blobs, Csv, Idx };

std::string to_string(DatasetKind k);
DatasetKind parse_dataset_kind(const std::string& s);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Blobs;
  /// CSV file, or IDX image file.
  std::string path;
  /// IDX label file.
  std::string labels_path;
  int classes = 2;
  /// Blobs generator.
  Index samples = 5000;
  Index features = 20;
  double separation = 1.0;
  /// Held-out share for the seeded test split.
  double test_fraction = 0.2;

  bool operator==(const DatasetSpec&) const = default;
};

struct ObjectiveSpec {
  Family family = Family::NoisyQuadratic;
  /// Synthetic families.
  Index dimension = 10;
  double sigma = 0.1;
  double radius = 10.0;
  double init_radius = 5.0;
  /// Quadratic spectrum; empty means linspace(0.1, 1, dimension).
  std::vector<double> eigenvalues;
  double beta = 0.5;
  double omega = 3.0;
  /// Classifier.
  Index hidden = 16;
  DatasetSpec dataset;

  bool operator==(const ObjectiveSpec&) const = default;
};

struct MaskSpec {
  MaskPolicy policy{MaskKind::Fisher};
  double sparsity = 0.5;

  bool operator==(const MaskSpec&) const = default;
};

/// Cartesian grid; an empty axis keeps the base value.
struct AblationSpec {
  std::vector<double> sparsity;
  std::vector<double> rho;
  std::vector<Index> fisher_samples;
  std::vector<int> update_interval;
  std::vector<std::string> strategy;

  bool empty() const;
  std::size_t cells() const;
  bool operator==(const AblationSpec&) const = default;
};

struct SpectrumSpec {
  Index k = 5;
  Index iters = 20;
  Index batch_samples = 256;

  bool operator==(const SpectrumSpec&) const = default;
};

struct LandscapeSpec {
  Index resolution = 51;
  double range = 1.0;
  Index batch_samples = 256;

  bool operator==(const LandscapeSpec&) const = default;
};

struct RatioSpec {
  double rho = 0.05;
  Index batch_samples = 256;

  bool operator==(const RatioSpec&) const = default;
};

struct TheorySpec {
  std::vector<double> lemma_rhos{0.01, 0.05, 0.1};
  long lemma_points = 100;
  long mc_reps = 10000;
  double descent_eta = 0.5;
  double descent_rho = 0.05;
  long descent_points = 1000;
  long descent_reps = 1000;
  long steps = 10000;
  long repeats = 20;
  long steps_per_epoch = 100;

  bool operator==(const TheorySpec&) const = default;
};

struct FlopsSpec {
  double forward_fraction = 0.3;
  std::vector<double> sparsities{0.5, 0.8, 0.9, 0.95, 0.98, 0.99};

  bool operator==(const FlopsSpec&) const = default;
};

struct ExperimentConfig {
  ObjectiveSpec objective;
  OptimizerConfig optimizer;
  MaskSpec mask;
  int epochs = 10;
  Index batch_size = 32;
  /// Steps that make one epoch on synthetic objectives.
  Index steps_per_epoch = 10;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
  AblationSpec ablation;
  SpectrumSpec spectrum;
  LandscapeSpec landscape;
  RatioSpec ratio;
  TheorySpec theory;
  FlopsSpec flops;

  /// Throws ConfigError naming the dotted field path.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates. Unknown keys are rejected; JSON syntax errors report
/// line and column. Relative dataset paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace ssam
