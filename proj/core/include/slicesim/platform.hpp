#pragma once

#include <cstdint>
#include <string>

#include "slicesim/dpr_params.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

/// Geometry and timing of a sliced CGRA.
///
/// The tile array is `columns` x `rows` tiles, grouped into array-slices of
/// `cols_per_array_slice` whole columns. Each GLB bank is one GLB-slice.
/// PE and MEM tiles are assumed evenly distributed across columns.
struct PlatformConfig {
  std::string name = "amber-default";
  std::uint32_t columns = 32;
  std::uint32_t rows = 16;
  std::uint32_t pe_tiles = 384;
  std::uint32_t mem_tiles = 128;
  std::uint32_t cols_per_array_slice = 4;
  std::uint32_t glb_banks = 32;
  std::uint64_t bank_capacity_bytes = 128 * 1024;
  double bank_bandwidth_bytes_per_s = 4.0 * 500e6;
  double clock_hz = 500e6;
  /// Extra GLB-slices charged by derive_slices, e.g. for bitstream storage.
  std::uint32_t glb_surcharge_slices = 0;
  /// Configuration words per tile; sets the default bitstream size per slice.
  std::uint32_t words_per_tile = 64;
  DprParams dpr;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  std::uint32_t array_slice_count() const { return columns / cols_per_array_slice; }
  std::uint32_t pe_per_slice() const { return pe_tiles / array_slice_count(); }
  std::uint32_t mem_per_slice() const { return mem_tiles / array_slice_count(); }
  std::uint64_t bitstream_words_per_slice() const {
    return std::uint64_t{rows} * cols_per_array_slice * words_per_tile;
  }
  double cycles_to_seconds(Cycles c) const { return static_cast<double>(c) / clock_hz; }
  Cycles seconds_to_cycles(double s) const;

  friend bool operator==(const PlatformConfig&, const PlatformConfig&) = default;
};

/// The 32x16 Amber-like fabric with 32 x 128 KB GLB banks at 500 MHz.
PlatformConfig amber_default();

struct FineGrainedUsage {
  std::uint32_t pe_tiles = 0;
  std::uint32_t mem_tiles = 0;
  std::uint64_t glb_capacity_bytes = 0;
  double glb_bandwidth_bytes_per_s = 0.0;
};

struct SliceTotals {
  std::uint32_t array_slice_total;
  std::uint32_t glb_slice_total;

  SliceUsage as_usage() const { return {array_slice_total, glb_slice_total}; }
};

SliceTotals slice_counts(const PlatformConfig& config);

/// Maps fine-grained compiler output onto slice counts. Both counts are
/// floored at one. Throws CapacityError when the usage exceeds the platform.
SliceUsage derive_slices(const FineGrainedUsage& usage, const PlatformConfig& config);

}  // namespace slicesim
