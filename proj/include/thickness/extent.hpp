#pragma once

#include <algorithm>
#include <compare>
#include <optional>

#include "errors.hpp"

namespace nir {

/// A nonnegative length that may be unbounded.
///
/// Unbounded is a distinguished state rather than a large float, so that
/// min() over extents is exact: min(x, unbounded) == x for every finite x.
class Extent {
 public:
  constexpr Extent() = default;  // unbounded

  static constexpr Extent unbounded() { return Extent(); }
  static constexpr Extent finite(double v) {
    Extent e;
    e.value_ = v;
    return e;
  }

  constexpr bool bounded() const { return value_.has_value(); }
  constexpr bool is_unbounded() const { return !value_.has_value(); }

  double value() const {
    if (!value_) fail(ErrorKind::OutOfRange, "value() of an unbounded extent");
    return *value_;
  }
  constexpr double value_or(double fallback) const { return value_.value_or(fallback); }

  Extent scaled(double factor) const { return bounded() ? finite(*value_ * factor) : unbounded(); }

  friend constexpr bool operator==(const Extent&, const Extent&) = default;

  friend constexpr std::partial_ordering operator<=>(const Extent& a, const Extent& b) {
    if (a.bounded() && b.bounded()) return *a.value_ <=> *b.value_;
    if (a.bounded()) return std::partial_ordering::less;
    if (b.bounded()) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  friend constexpr Extent min(const Extent& a, const Extent& b) { return (b < a) ? b : a; }

 private:
  std::optional<double> value_;
};

/// Reciprocal of a nonnegative rate; zero maps to unbounded.
inline Extent reciprocal_extent(double rate) {
  return rate > 0.0 ? Extent::finite(1.0 / rate) : Extent::unbounded();
}

}  // namespace nir
