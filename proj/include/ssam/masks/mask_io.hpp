#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssam/masks/sparse_mask.hpp"

namespace ssam {

/// Binary mask layout, all integers little-endian:
///   bytes 0-3   magic "SSMK"
///   bytes 4-7   format version (1)
///   bytes 8-15  dimension d (uint64)
///   bytes 16-23 sparsity s (IEEE-754 binary64)
///   then ceil(d / 8) payload bytes, coordinate i at bit (i % 8) of byte i / 8.
/// Unused high bits of the last byte are zero.
inline constexpr char kMaskMagic[4] = {'S', 'S', 'M', 'K'};
inline constexpr std::uint32_t kMaskFormatVersion = 1;

std::vector<std::uint8_t> encode_mask(const SparseMask& mask);
/// Throws FormatError naming the byte offset of the first problem.
SparseMask decode_mask(const std::vector<std::uint8_t>& bytes);

void write_mask(const SparseMask& mask, const std::filesystem::path& path);
SparseMask read_mask(const std::filesystem::path& path);

/// {"dimension": d, "sparsity": s, "active": [i0, i1, ...]}
nlohmann::json mask_to_json(const SparseMask& mask);
SparseMask mask_from_json(const nlohmann::json& j);

}  // namespace ssam
