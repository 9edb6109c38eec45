#include "ssam/numcore/param_vector.hpp"

#include <algorithm>

namespace ssam {

Partition::Partition(std::vector<Segment> segments) : segments_(std::move(segments)) {
  Index expected = 0;
  for (const auto& seg : segments_) {
    if (seg.length < 0) throw ConfigError("partition", "segment '" + seg.name + "' has negative length");
    if (seg.offset != expected) {
      throw ConfigError("partition", "segment '" + seg.name + "' starts at " + std::to_string(seg.offset) +
                                         ", expected " + std::to_string(expected));
    }
    expected += seg.length;
  }
  dimension_ = expected;
}

std::shared_ptr<const Partition> Partition::single(Index d, std::string name) {
  return std::make_shared<const Partition>(std::vector<Segment>{{std::move(name), 0, d}});
}

std::shared_ptr<const Partition> Partition::from_lengths(
    const std::vector<std::pair<std::string, Index>>& groups) {
  std::vector<Segment> segs;
  Index offset = 0;
  for (const auto& [name, len] : groups) {
    segs.push_back({name, offset, len});
    offset += len;
  }
  return std::make_shared<const Partition>(std::move(segs));
}

const Segment& Partition::segment_of(Index i) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), i,
                             [](Index idx, const Segment& s) { return idx < s.offset + s.length; });
  if (it == segments_.end() || i < 0) throw InvalidArgument("coordinate out of range");
  return *it;
}

std::optional<Segment> Partition::find(const std::string& name) const {
  for (const auto& seg : segments_) {
    if (seg.name == name) return seg;
  }
  return std::nullopt;
}

}  // namespace ssam
