#pragma once

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssam/error.hpp"

namespace ssam {

using Index = Eigen::Index;

/// A named contiguous slice of a flat parameter vector (one layer's weights, one bias, ...).
struct Segment {
  std::string name;
  Index offset = 0;
  Index length = 0;

  bool operator==(const Segment&) const = default;
};

/// Ordered, disjoint, contiguous cover of [0, d).
class Partition {
 public:
  /// Throws ConfigError unless the segments tile [0, d) in order.
  explicit Partition(std::vector<Segment> segments);

  static std::shared_ptr<const Partition> single(Index d, std::string name = "w");
  /// Builds consecutive segments from (name, length) pairs.
  static std::shared_ptr<const Partition> from_lengths(
      const std::vector<std::pair<std::string, Index>>& groups);

  Index dimension() const noexcept { return dimension_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }

  /// Segment containing coordinate i.
  const Segment& segment_of(Index i) const;
  std::optional<Segment> find(const std::string& name) const;

  bool operator==(const Partition& other) const { return segments_ == other.segments_; }

 private:
  std::vector<Segment> segments_;
  Index dimension_ = 0;
};

using PartitionPtr = std::shared_ptr<const Partition>;

/// Name of the first group holding a non-finite value, or nullopt if all values are finite.
template <typename Derived>
std::optional<std::string> first_nonfinite_group(const Eigen::MatrixBase<Derived>& v, const Partition& p) {
  for (const auto& seg : p.segments()) {
    if (!v.segment(seg.offset, seg.length).allFinite()) return seg.name;
  }
  return std::nullopt;
}

/// Flat weight vector with a group partition. Values are always finite; every
/// arithmetic result is checked and a NumericalError names the offending group.
template <typename Scalar>
class BasicParamVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicParamVector() : partition_(Partition::single(0)) {}

  BasicParamVector(Vector values, PartitionPtr partition)
      : values_(std::move(values)), partition_(std::move(partition)) {
    if (!partition_) throw ConfigError("partition", "null partition");
    if (values_.size() != partition_->dimension()) {
      throw ConfigError("partition", "value length " + std::to_string(values_.size()) +
                                         " does not match partition dimension " +
                                         std::to_string(partition_->dimension()));
    }
    check_finite();
  }

  /// Single-group vector.
  explicit BasicParamVector(Vector values)
      : BasicParamVector(values, Partition::single(values.size())) {}

  static BasicParamVector zeros(PartitionPtr partition) {
    const Index d = partition->dimension();
    return BasicParamVector(Vector::Zero(d), std::move(partition));
  }

  BasicParamVector like(Vector values) const { return BasicParamVector(std::move(values), partition_); }

  const Vector& values() const noexcept { return values_; }
  const PartitionPtr& partition_ptr() const noexcept { return partition_; }
  const Partition& partition() const noexcept { return *partition_; }
  Index size() const noexcept { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

  auto group(const Segment& seg) const { return values_.segment(seg.offset, seg.length); }

  Scalar norm() const { return values_.norm(); }
  Scalar squared_norm() const { return values_.squaredNorm(); }

  Scalar dot(const BasicParamVector& other) const {
    require_compatible(other);
    return values_.dot(other.values_);
  }

  BasicParamVector operator+(const BasicParamVector& other) const {
    require_compatible(other);
    return like(values_ + other.values_);
  }
  BasicParamVector operator-(const BasicParamVector& other) const {
    require_compatible(other);
    return like(values_ - other.values_);
  }
  BasicParamVector operator*(Scalar c) const { return like(values_ * c); }
  friend BasicParamVector operator*(Scalar c, const BasicParamVector& v) { return v * c; }

  BasicParamVector cwise_product(const BasicParamVector& other) const {
    require_compatible(other);
    return like(values_.cwiseProduct(other.values_));
  }

  bool same_layout(const BasicParamVector& other) const {
    return partition_ == other.partition_ || *partition_ == *other.partition_;
  }

  /// Bitwise equality of values and layout.
  bool operator==(const BasicParamVector& other) const {
    if (!same_layout(other)) return false;
    for (Index i = 0; i < values_.size(); ++i) {
      if (values_[i] != other.values_[i]) return false;
    }
    return true;
  }

 private:
  void require_compatible(const BasicParamVector& other) const {
    if (!same_layout(other)) throw ConfigError("partition", "operands have different partitions");
  }

  void check_finite() const {
    if (auto g = first_nonfinite_group(values_, *partition_)) {
      throw NumericalError("non-finite parameter value", *g);
    }
  }

  Vector values_;
  PartitionPtr partition_;
};

using ParamVector = BasicParamVector<double>;

}  // namespace ssam
