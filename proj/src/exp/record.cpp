#include "ssam/exp/record.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ssam/diagnostics/report_io.hpp"
#include "ssam/error.hpp"
#include "ssam/masks/mask_io.hpp"

namespace ssam {
namespace {

using nlohmann::json;

std::string row_prefix(const StepRow& r) {
  std::string s;
  s += std::to_string(r.step);
  s += ',' + std::to_string(r.epoch);
  s += ',' + format_double(r.loss);
  s += ',' + format_double(r.grad_norm_sq);
  s += ',' + format_double(r.rho_t);
  s += ',' + format_double(r.eta_t);
  s += ',' + format_double(r.sparsity);
  s += r.mask_regen ? ",1" : ",0";
  return s;
}

template <typename T>
T parse_field(const std::string& cell, const std::string& where) {
  T v{};
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw FormatError(where + ": cannot parse '" + cell + "'");
  return v;
}

StepRow parse_row(const std::string& line, const std::string& where) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (cells.size() != 9) throw FormatError(where + ": expected 9 fields");
  StepRow r;
  r.step = parse_field<long>(cells[0], where);
  r.epoch = parse_field<int>(cells[1], where);
  r.loss = parse_field<double>(cells[2], where);
  r.grad_norm_sq = parse_field<double>(cells[3], where);
  r.rho_t = parse_field<double>(cells[4], where);
  r.eta_t = parse_field<double>(cells[5], where);
  r.sparsity = parse_field<double>(cells[6], where);
  const int regen = parse_field<int>(cells[7], where);
  if (regen != 0 && regen != 1) throw FormatError(where + ": mask_regen must be 0 or 1");
  r.mask_regen = regen == 1;
  r.wall_ms = parse_field<double>(cells[8], where);
  return r;
}

}  // namespace

std::string format_row_without_time(const StepRow& r) { return row_prefix(r); }

std::string format_row(const StepRow& r) { return row_prefix(r) + ',' + format_double(r.wall_ms); }

void emit_record(const RunRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::string csv = std::string(kStepCsvHeader) + '\n';
  for (const StepRow& r : record.rows) csv += format_row(r) + '\n';
  write_text_file(dir / "steps.csv", csv);

  json j;
  j["config"] = config_to_json(record.config);
  j["metrics"] = record.metrics;
  j["mask_time_ms"] = record.mask_time_ms;
  j["mask_generations"] = record.mask_generations;
  j["grad_evals"] = record.grad_evals;
  j["status"] = record.status;
  j["message"] = record.message;
  j["defaults"] = "desk-scale";
  j["has_mask"] = record.final_mask.has_value();
  write_text_file(dir / "record.json", j.dump(2) + '\n');
  if (record.final_mask) write_mask(*record.final_mask, dir / "mask.ssm");
}

RunRecord read_record(const std::filesystem::path& dir) {
  const auto csv_path = dir / "steps.csv";
  const auto json_path = dir / "record.json";
  std::ifstream js(json_path);
  if (!js) throw IoError("cannot open " + json_path.string());
  json j;
  try {
    j = json::parse(js);
  } catch (const json::parse_error& e) {
    throw FormatError(json_path.string() + ": " + e.what());
  }

  RunRecord r;
  try {
    r.config = parse_config(j.at("config").dump());
    r.metrics = j.at("metrics").get<std::map<std::string, double>>();
    r.mask_time_ms = j.at("mask_time_ms").get<double>();
    r.mask_generations = j.at("mask_generations").get<long>();
    r.grad_evals = j.at("grad_evals").get<long>();
    r.status = j.at("status").get<std::string>();
    r.message = j.at("message").get<std::string>();
    if (j.at("has_mask").get<bool>()) r.final_mask = read_mask(dir / "mask.ssm");
  } catch (const json::exception& e) {
    throw FormatError(json_path.string() + ": " + e.what());
  }

  std::ifstream cs(csv_path);
  if (!cs) throw IoError("cannot open " + csv_path.string());
  std::string line;
  if (!std::getline(cs, line) || line != kStepCsvHeader)
    throw FormatError(csv_path.string() + ": line 1: unexpected header");
  long line_no = 1;
  while (std::getline(cs, line)) {
    ++line_no;
    if (line.empty()) continue;
    r.rows.push_back(parse_row(line, csv_path.string() + ": line " + std::to_string(line_no)));
  }
  return r;
}

}  // namespace ssam
