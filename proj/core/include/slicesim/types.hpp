#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace slicesim {

/// Simulation time. One unit is one fabric clock cycle.
using Cycles = std::uint64_t;

enum class RequestId : std::uint64_t {};
enum class RegionId : std::uint64_t {};

constexpr std::uint64_t to_underlying(RequestId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t to_underlying(RegionId id) { return static_cast<std::uint64_t>(id); }

/// Coarse-grained resource footprint: a count of array-slices and GLB-slices.
struct SliceUsage {
  std::uint32_t array_slices = 0;
  std::uint32_t glb_slices = 0;

  friend auto operator<=>(const SliceUsage&, const SliceUsage&) = default;

  bool fits_within(const SliceUsage& capacity) const {
    return array_slices <= capacity.array_slices && glb_slices <= capacity.glb_slices;
  }
};

inline std::ostream& operator<<(std::ostream& os, const SliceUsage& u) {
  return os << "(" << u.array_slices << "," << u.glb_slices << ")";
}

constexpr std::uint64_t ceil_div(std::uint64_t num, std::uint64_t den) { return (num + den - 1) / den; }

}  // namespace slicesim
