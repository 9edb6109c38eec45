#include "ssam/masks/mask_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ssam {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

constexpr std::size_t kHeaderBytes = 24;

}  // namespace

std::vector<std::uint8_t> encode_mask(const SparseMask& mask) {
  std::vector<std::uint8_t> out(kMaskMagic, kMaskMagic + 4);
  put_le(out, kMaskFormatVersion, 4);
  put_le(out, static_cast<std::uint64_t>(mask.size()), 8);
  put_le(out, std::bit_cast<std::uint64_t>(mask.sparsity()), 8);
  const std::size_t d = static_cast<std::size_t>(mask.size());
  std::vector<std::uint8_t> payload((d + 7) / 8, 0);
  for (std::size_t i = 0; i < d; ++i)
    if (mask.bits()[i]) payload[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

SparseMask decode_mask(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("mask file truncated in header at byte " + std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), kMaskMagic, 4) != 0) throw FormatError("bad mask magic at byte 0");
  const auto version = get_le(bytes, 4, 4);
  if (version != kMaskFormatVersion) throw FormatError("unsupported mask version " + std::to_string(version) + " at byte 4");
  const auto d = get_le(bytes, 8, 8);
  const double s = std::bit_cast<double>(get_le(bytes, 16, 8));
  const std::size_t payload = static_cast<std::size_t>((d + 7) / 8);
  if (bytes.size() != kHeaderBytes + payload) {
    throw FormatError("mask payload has " + std::to_string(bytes.size() - kHeaderBytes) + " bytes, expected " +
                      std::to_string(payload) + " (byte 24)");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bytes[kHeaderBytes + i / 8] >> (i % 8)) & 1u;
  if (d % 8 != 0) {
    const std::uint8_t last = bytes.back();
    if (last >> (d % 8)) throw FormatError("nonzero padding bits at byte " + std::to_string(bytes.size() - 1));
  }
  try {
    return SparseMask::from_bits(std::move(bits), s);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("inconsistent mask: ") + e.what());
  }
}

void write_mask(const SparseMask& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const auto bytes = encode_mask(mask);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

SparseMask read_mask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_mask(bytes);
}

nlohmann::json mask_to_json(const SparseMask& mask) {
  return {{"dimension", mask.size()}, {"sparsity", mask.sparsity()}, {"active", mask.active_indices()}};
}

SparseMask mask_from_json(const nlohmann::json& j) {
  try {
    return SparseMask(j.at("dimension").get<Index>(), j.at("sparsity").get<double>(),
                      j.at("active").get<std::vector<Index>>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed mask JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("inconsistent mask JSON: ") + e.what());
  }
}

}  // namespace ssam
