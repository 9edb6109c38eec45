#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ssam/exp/record.hpp"

namespace ssam {

/// Maps a strategy label (fisher, random, fixed, dynamic-flattest,
/// dynamic-sharpest, dynamic-random) onto a mask policy.
MaskPolicy strategy_policy(const std::string& label, const MaskPolicy& base);

struct AblationCell {
  std::size_t index = 0;
  ExperimentConfig config;
  /// Axis name -> value as printed in the summary.
  std::vector<std::pair<std::string, std::string>> keys;
};

/// Cartesian product in axis order sparsity, rho, fisher_samples,
/// update_interval, strategy (last varies fastest). Cell i uses seed base + i.
std::vector<AblationCell> expand_grid(const ExperimentConfig& base);

struct AblationResult {
  std::vector<AblationCell> cells;
  std::vector<RunRecord> records;
};

/// Runs every cell on `threads` workers. A failing cell is recorded with its
/// status and message; the others proceed.
AblationResult run_ablation(const ExperimentConfig& base, int threads = 1);

/// One row per cell: cell, the axis columns, seed, status and final metrics.
std::string summary_csv(const AblationResult& result);
/// cell_<i>/ record directories plus summary.csv.
void emit_ablation(const AblationResult& result, const std::filesystem::path& dir);

}  // namespace ssam
