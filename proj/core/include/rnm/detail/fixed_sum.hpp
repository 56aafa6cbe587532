#pragma once

#include <cstdint>

namespace rnm::detail {

/// Order-independent sum of non-negative doubles.
///
/// Each term is truncated to a multiple of 2^-79 and added as an integer, so
/// the result does not depend on the order of the terms. Terms must lie in
/// [0, 2^40]; the running total must stay below 2^47.
class FixedSum {
 public:
  void add(double x) noexcept {
    // floor(x * 2^79) as (floor(x * 2^16) << 63) + floor(frac * 2^63). Every
    // step is exact: scaling by powers of two and removing the integer part.
    // Both parts fit a signed 64-bit integer, which converts without branches.
    const double scaled = x * 0x1p16;
    const auto high = static_cast<std::int64_t>(scaled);
    const auto low = static_cast<std::int64_t>((scaled - static_cast<double>(high)) * 0x1p63);
    total_ += (static_cast<unsigned __int128>(high) << 63) + static_cast<std::uint64_t>(low);
  }

  void add(const FixedSum& other) noexcept { total_ += other.total_; }

  double value() const noexcept {
    return static_cast<double>(total_) * 0x1p-79;
  }

 private:
  unsigned __int128 total_ = 0;
};

}  // namespace rnm::detail
