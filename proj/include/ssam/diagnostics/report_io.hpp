#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ssam/diagnostics/landscape.hpp"
#include "ssam/diagnostics/lanczos.hpp"
#include "ssam/diagnostics/ratio.hpp"

namespace ssam {

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// bin_lo,bin_hi,count rows.
void write_histogram_csv(std::ostream& out, const RatioHistogram& h);
/// x,y,loss rows, x-major.
void write_grid_csv(std::ostream& out, const LandscapeGrid& g);
std::string spectrum_to_json(const SpectrumReport& r);
std::string histogram_summary_json(const RatioHistogram& h);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ssam
