#pragma once

#include <cstdint>
#include <filesystem>

#include "ssam/exp/config.hpp"
#include "ssam/numcore/objective.hpp"

namespace ssam {

struct Dataset {
  Batch train;
  Batch test;
};

/// IDX image/label pair (0x00000803 / 0x00000801, big-endian dims), pixels
/// scaled to [0, 1]. FormatError messages name the byte offset.
Batch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, int classes);
/// Header row with a "label" column; every other column is a feature.
/// FormatError messages name the line.
Batch load_csv(const std::filesystem::path& path, int classes);
/// Gaussian blobs: unit-variance clusters around class means on a sphere of
/// radius `separation`.
Batch make_blobs(Index samples, Index features, int classes, double separation, std::uint64_t seed);
/// Seeded split; the first round(fraction n) shuffled rows become the test set.
Dataset split_dataset(const Batch& all, double test_fraction, std::uint64_t seed);
Batch take_rows(const Batch& data, const std::vector<Index>& rows);

/// Loads or generates the configured dataset and splits it.
Dataset load_dataset(const DatasetSpec& spec, std::uint64_t seed);

}  // namespace ssam
