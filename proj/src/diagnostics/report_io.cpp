#include "ssam/diagnostics/report_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "ssam/error.hpp"

namespace ssam {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_histogram_csv(std::ostream& out, const RatioHistogram& h) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
}

void write_grid_csv(std::ostream& out, const LandscapeGrid& g) {
  out << "x,y,loss\n";
  for (Index i = 0; i < g.resolution(); ++i)
    for (Index j = 0; j < g.resolution(); ++j)
      out << format_double(g.coords[i]) << ',' << format_double(g.coords[j]) << ',' << format_double(g.loss(i, j))
          << '\n';
}

std::string spectrum_to_json(const SpectrumReport& r) {
  nlohmann::json j;
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.begin(), r.eigenvalues.end());
  j["residuals"] = std::vector<double>(r.residuals.begin(), r.residuals.end());
  j["iterations"] = r.iterations;
  j["breakdown"] = r.breakdown;
  j["ratio_1_5"] = r.ratio_1_5 ? nlohmann::json(*r.ratio_1_5) : nlohmann::json(nullptr);
  return j.dump(2);
}

std::string histogram_summary_json(const RatioHistogram& h) {
  nlohmann::json j;
  j["fraction_below_zero"] = h.fraction_below_zero;
  j["excluded_count"] = h.excluded_count;
  j["included_count"] = h.included();
  j["bins"] = h.counts.size();
  return j.dump(2);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace ssam
