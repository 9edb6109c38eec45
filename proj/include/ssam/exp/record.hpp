#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssam/exp/config.hpp"
#include "ssam/masks/sparse_mask.hpp"

namespace ssam {

inline constexpr const char* kStepCsvHeader = "step,epoch,loss,grad_norm_sq,rho_t,eta_t,sparsity,mask_regen,wall_ms";

struct StepRow {
  long step = 0;
  int epoch = 0;
  double loss = 0.0;
  double grad_norm_sq = 0.0;
  double rho_t = 0.0;
  double eta_t = 0.0;
  double sparsity = 0.0;
  bool mask_regen = false;
  double wall_ms = 0.0;

  bool operator==(const StepRow&) const = default;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<StepRow> rows;
  std::map<std::string, double> metrics;
  double mask_time_ms = 0.0;
  long mask_generations = 0;
  long grad_evals = 0;
  /// "ok" or "numerical_failure".
  std::string status = "ok";
  std::string message;
  std::optional<SparseMask> final_mask;

  bool ok() const noexcept { return status == "ok"; }
  bool operator==(const RunRecord&) const = default;
};

/// One CSV line (no newline) in the fixed column order.
std::string format_row(const StepRow& r);
/// The same line without the wall-clock column.
std::string format_row_without_time(const StepRow& r);

/// Writes steps.csv, record.json and (when present) mask.ssm into dir.
void emit_record(const RunRecord& record, const std::filesystem::path& dir);
/// Reads a directory written by emit_record.
RunRecord read_record(const std::filesystem::path& dir);

}  // namespace ssam
