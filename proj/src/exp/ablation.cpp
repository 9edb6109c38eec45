#include "ssam/exp/ablation.hpp"

#include <atomic>
#include <thread>

#include "ssam/diagnostics/report_io.hpp"
#include "ssam/error.hpp"
#include "ssam/exp/train.hpp"

namespace ssam {

MaskPolicy strategy_policy(const std::string& label, const MaskPolicy& base) {
  MaskPolicy p = base;
  if (label == "fisher") {
    p.kind = MaskKind::Fisher;
  } else if (label == "random") {
    p.kind = MaskKind::Random;
  } else if (label == "fixed") {
    p.kind = MaskKind::Fixed;
  } else if (label == "dynamic-flattest") {
    p.kind = MaskKind::Dynamic;
    p.drop_criterion = DropCriterion::Flattest;
  } else if (label == "dynamic-sharpest") {
    p.kind = MaskKind::Dynamic;
    p.drop_criterion = DropCriterion::Sharpest;
  } else if (label == "dynamic-random") {
    p.kind = MaskKind::Dynamic;
    p.drop_criterion = DropCriterion::Random;
  } else {
    throw ConfigError("ablation.strategy", "unknown strategy '" + label + "'");
  }
  return p;
}

std::vector<AblationCell> expand_grid(const ExperimentConfig& base) {
  const AblationSpec& a = base.ablation;
  if (a.empty()) throw ConfigError("ablation", "grid has no axes");
  auto axis = [](const auto& values) { return values.empty() ? std::size_t{1} : values.size(); };
  std::vector<AblationCell> cells;
  std::size_t index = 0;
  for (std::size_t i0 = 0; i0 < axis(a.sparsity); ++i0)
    for (std::size_t i1 = 0; i1 < axis(a.rho); ++i1)
      for (std::size_t i2 = 0; i2 < axis(a.fisher_samples); ++i2)
        for (std::size_t i3 = 0; i3 < axis(a.update_interval); ++i3)
          for (std::size_t i4 = 0; i4 < axis(a.strategy); ++i4) {
            AblationCell cell;
            cell.index = index;
            ExperimentConfig& c = cell.config;
            c = base;
            c.ablation = {};
            c.seed = base.seed + index;
            if (!a.sparsity.empty()) {
              c.mask.sparsity = a.sparsity[i0];
              cell.keys.emplace_back("sparsity", format_double(a.sparsity[i0]));
            }
            if (!a.rho.empty()) {
              c.optimizer.rho0 = a.rho[i1];
              cell.keys.emplace_back("rho", format_double(a.rho[i1]));
            }
            if (!a.fisher_samples.empty()) {
              c.mask.policy.fisher_samples = a.fisher_samples[i2];
              cell.keys.emplace_back("fisher_samples", std::to_string(a.fisher_samples[i2]));
            }
            if (!a.update_interval.empty()) {
              c.mask.policy.update_interval = a.update_interval[i3];
              cell.keys.emplace_back("update_interval", std::to_string(a.update_interval[i3]));
            }
            if (!a.strategy.empty()) {
              c.mask.policy = strategy_policy(a.strategy[i4], c.mask.policy);
              cell.keys.emplace_back("strategy", a.strategy[i4]);
            }
            cells.push_back(std::move(cell));
            ++index;
          }
  return cells;
}

AblationResult run_ablation(const ExperimentConfig& base, int threads) {
  AblationResult out;
  out.cells = expand_grid(base);
  out.records.resize(out.cells.size());

  auto run_cell = [&](std::size_t i) {
    const ExperimentConfig& cfg = out.cells[i].config;
    try {
      out.records[i] = train(cfg);
    } catch (const std::exception& e) {
      RunRecord failed;
      failed.config = cfg;
      failed.status = "failed";
      failed.message = e.what();
      out.records[i] = std::move(failed);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                      out.cells.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < out.cells.size(); ++i) run_cell(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < out.cells.size(); i = next++) run_cell(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

std::string summary_csv(const AblationResult& result) {
  static const char* metric_names[] = {"final_loss", "train_loss", "train_accuracy", "test_accuracy"};
  std::string csv = "cell";
  if (!result.cells.empty())
    for (const auto& [name, value] : result.cells.front().keys) csv += ',' + name;
  csv += ",seed,status";
  for (const char* m : metric_names) csv += std::string(",") + m;
  csv += ",mask_time_ms,mask_generations\n";
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const AblationCell& cell = result.cells[i];
    const RunRecord& rec = result.records[i];
    csv += std::to_string(cell.index);
    for (const auto& [name, value] : cell.keys) csv += ',' + value;
    csv += ',' + std::to_string(cell.config.seed) + ',' + rec.status;
    for (const char* m : metric_names) {
      const auto it = rec.metrics.find(m);
      csv += ',';
      if (it != rec.metrics.end()) csv += format_double(it->second);
    }
    csv += ',' + format_double(rec.mask_time_ms) + ',' + std::to_string(rec.mask_generations) + '\n';
  }
  return csv;
}

void emit_ablation(const AblationResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < result.records.size(); ++i)
    emit_record(result.records[i], dir / ("cell_" + std::to_string(result.cells[i].index)));
  write_text_file(dir / "summary.csv", summary_csv(result));
}

}  // namespace ssam
