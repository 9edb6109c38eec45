#include "ssam/exp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ssam/error.hpp"
#include "ssam/numcore/rng.hpp"

namespace ssam {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off, const std::string& file) {
  if (off + 4 > b.size())
    throw FormatError(file + ": truncated header at byte offset " + std::to_string(off));
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) | (std::uint32_t(b[off + 2]) << 8) |
         std::uint32_t(b[off + 3]);
}

void check_label(int y, int classes, const std::string& where) {
  if (y < 0 || y >= classes)
    throw FormatError(where + ": label " + std::to_string(y) + " outside [0, " + std::to_string(classes) + ")");
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Batch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, int classes) {
  const auto img = read_bytes(images);
  const auto lab = read_bytes(labels);
  const std::string in = images.string(), ln = labels.string();
  if (be32(img, 0, in) != 0x00000803u) throw FormatError(in + ": bad magic at byte offset 0 (expected 0x00000803)");
  if (be32(lab, 0, ln) != 0x00000801u) throw FormatError(ln + ": bad magic at byte offset 0 (expected 0x00000801)");
  const std::size_t n = be32(img, 4, in), rows = be32(img, 8, in), cols = be32(img, 12, in);
  const std::size_t n_labels = be32(lab, 4, ln);
  if (n_labels != n)
    throw FormatError(ln + ": label count at byte offset 4 is " + std::to_string(n_labels) + ", images have " +
                      std::to_string(n));
  const std::size_t pixels = rows * cols;
  if (img.size() != 16 + n * pixels)
    throw FormatError(in + ": expected " + std::to_string(16 + n * pixels) + " bytes, payload ends at byte offset " +
                      std::to_string(img.size()));
  if (lab.size() != 8 + n)
    throw FormatError(ln + ": expected " + std::to_string(8 + n) + " bytes, payload ends at byte offset " +
                      std::to_string(lab.size()));

  Batch b;
  b.num_classes = classes;
  b.inputs.resize(static_cast<Index>(n), static_cast<Index>(pixels));
  b.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < pixels; ++p)
      b.inputs(static_cast<Index>(i), static_cast<Index>(p)) = img[16 + i * pixels + p] / 255.0;
    const int y = lab[8 + i];
    check_label(y, classes, ln + " byte offset " + std::to_string(8 + i));
    b.targets[i] = y;
  }
  return b;
}

Batch load_csv(const std::filesystem::path& path, int classes) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  const std::string name = path.string();
  std::string line;
  if (!std::getline(f, line)) throw FormatError(name + ": line 1: missing header row");
  const auto header = split_commas(line);
  std::ptrdiff_t label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (trim(header[c]) == "label") label_col = static_cast<std::ptrdiff_t>(c);
  if (label_col < 0) throw FormatError(name + ": line 1: no column named \"label\"");
  const Index features = static_cast<Index>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  long line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    const std::string where = name + ": line " + std::to_string(line_no);
    if (cells.size() != header.size())
      throw FormatError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                        std::to_string(cells.size()));
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(features));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw FormatError(where + ": field " + std::to_string(c + 1) + " is not a finite number");
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        if (v != std::floor(v)) throw FormatError(where + ": label must be an integer");
        check_label(static_cast<int>(v), classes, where);
        labels.push_back(static_cast<int>(v));
      } else {
        x.push_back(v);
      }
    }
    rows.push_back(std::move(x));
  }

  Batch b;
  b.num_classes = classes;
  b.inputs.resize(static_cast<Index>(rows.size()), features);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < features; ++j) b.inputs(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  b.targets = std::move(labels);
  return b;
}

Batch make_blobs(Index samples, Index features, int classes, double separation, std::uint64_t seed) {
  if (samples < 1 || features < 1 || classes < 2) throw InvalidArgument("make_blobs: bad shape");
  Rng rng(seed);
  Eigen::MatrixXd means(classes, features);
  for (int k = 0; k < classes; ++k) {
    Eigen::VectorXd u = standard_normal(rng, features);
    means.row(k) = (separation / u.norm()) * u.transpose();
  }
  Batch b;
  b.num_classes = classes;
  b.inputs.resize(samples, features);
  b.targets.resize(static_cast<std::size_t>(samples));
  for (Index i = 0; i < samples; ++i) {
    const int y = static_cast<int>(i % classes);
    b.targets[static_cast<std::size_t>(i)] = y;
    b.inputs.row(i) = means.row(y) + standard_normal(rng, features).transpose();
  }
  return b;
}

Batch take_rows(const Batch& data, const std::vector<Index>& rows) {
  Batch b;
  b.num_classes = data.num_classes;
  b.inputs.resize(static_cast<Index>(rows.size()), data.inputs.cols());
  b.targets.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    b.inputs.row(static_cast<Index>(i)) = data.inputs.row(rows[i]);
    b.targets[i] = data.targets[static_cast<std::size_t>(rows[i])];
  }
  return b;
}

Dataset split_dataset(const Batch& all, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw InvalidArgument("test fraction must lie in [0, 1)");
  const Index n = all.samples();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = static_cast<std::ptrdiff_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<Index> test(order.begin(), order.begin() + n_test), train(order.begin() + n_test, order.end());
  if (train.empty()) throw InvalidArgument("test split leaves no training rows");
  return {take_rows(all, train), take_rows(all, test)};
}

Dataset load_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  Batch all;
  switch (spec.kind) {
    case DatasetKind::Blobs:
      all = make_blobs(spec.samples, spec.features, spec.classes, spec.separation, derive_seed(seed, 101));
      break;
    case DatasetKind::Csv:
      all = load_csv(spec.path, spec.classes);
      break;
    case DatasetKind::Idx:
      all = load_idx(spec.path, spec.labels_path, spec.classes);
      break;
  }
  if (all.samples() < 2) throw FormatError("dataset has fewer than two rows");
  return split_dataset(all, spec.test_fraction, derive_seed(seed, 102));
}

}  // namespace ssam
