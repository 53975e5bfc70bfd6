#pragma once

#include <compare>
#include <ostream>

#include "treecut/rational.hpp"

namespace treecut {

/// Exact integer in the instance's common scaled units, or +infinity.
/// Infinity absorbs addition and compares greater than every finite value.
class ScaledValue {
 public:
  ScaledValue() = default;
  ScaledValue(BigInt v) : value_(std::move(v)) {}  // NOLINT: implicit by design of the carrier
  ScaledValue(long long v) : value_(v) {}          // NOLINT

  static ScaledValue infinity() {
    ScaledValue s;
    s.infinite_ = true;
    return s;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Precondition: finite.
  const BigInt& value() const { return value_; }

  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ScaledValue(a.value_ + b.value_);
  }

  friend bool operator==(const ScaledValue& a, const ScaledValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ScaledValue& a, const ScaledValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ScaledValue& v) {
    if (v.infinite_) return os << "inf";
    return os << v.value_;
  }

 private:
  BigInt value_ = 0;
  bool infinite_ = false;
};

}  // namespace treecut
