#include "slicesim/platform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slicesim/error.hpp"

namespace slicesim {

std::string_view to_string(DprMechanism m) {
  switch (m) {
    case DprMechanism::sequential_bus:
      return "sequential_bus";
    case DprMechanism::fast_parallel:
      return "fast_parallel";
  }
  return "?";
}

DprMechanism parse_dpr_mechanism(std::string_view name) {
  if (name == "sequential_bus") return DprMechanism::sequential_bus;
  if (name == "fast_parallel") return DprMechanism::fast_parallel;
  throw ConfigError("dpr.mechanism", "unknown mechanism '" + std::string(name) + "'");
}

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

void PlatformConfig::validate() const {
  require(columns > 0, "columns", "must be positive");
  require(rows > 0, "rows", "must be positive");
  require(pe_tiles > 0, "pe_tiles", "must be positive");
  require(mem_tiles > 0, "mem_tiles", "must be positive");
  require(cols_per_array_slice > 0, "cols_per_array_slice", "must be positive");
  require(glb_banks > 0, "glb_banks", "must be positive");
  require(bank_capacity_bytes > 0, "bank_capacity_bytes", "must be positive");
  require(bank_bandwidth_bytes_per_s > 0, "bank_bandwidth_bytes_per_s", "must be positive");
  require(clock_hz > 0, "clock_hz", "must be positive");
  require(words_per_tile > 0, "words_per_tile", "must be positive");
  require(columns % cols_per_array_slice == 0, "cols_per_array_slice",
          "columns must be divisible by cols_per_array_slice");
  require(std::uint64_t{pe_tiles} + mem_tiles == std::uint64_t{columns} * rows, "pe_tiles",
          "pe_tiles + mem_tiles must equal columns x rows");
  require(pe_tiles % array_slice_count() == 0, "pe_tiles",
          "PE tiles must distribute evenly over array-slices");
  require(mem_tiles % array_slice_count() == 0, "mem_tiles",
          "MEM tiles must distribute evenly over array-slices");
  require(dpr.bus_cycles_per_word > 0, "dpr.bus_cycles_per_word", "must be positive");
  require(dpr.stream_words_per_cycle_per_slice > 0, "dpr.stream_words_per_cycle_per_slice",
          "must be positive");
  require(dpr.preload_words_per_cycle > 0, "dpr.preload_words_per_cycle", "must be positive");
}

Cycles PlatformConfig::seconds_to_cycles(double s) const {
  return static_cast<Cycles>(std::llround(s * clock_hz));
}

PlatformConfig amber_default() { return PlatformConfig{}; }

SliceTotals slice_counts(const PlatformConfig& config) {
  config.validate();
  return {config.array_slice_count(), config.glb_banks};
}

SliceUsage derive_slices(const FineGrainedUsage& usage, const PlatformConfig& config) {
  config.validate();
  if (usage.glb_bandwidth_bytes_per_s < 0 || !std::isfinite(usage.glb_bandwidth_bytes_per_s)) {
    throw CapacityError("GLB bandwidth must be a finite non-negative rate");
  }
  if (usage.pe_tiles > config.pe_tiles || usage.mem_tiles > config.mem_tiles) {
    throw CapacityError("tile usage exceeds the tile array");
  }

  const std::uint64_t by_pe = ceil_div(usage.pe_tiles, config.pe_per_slice());
  const std::uint64_t by_mem = ceil_div(usage.mem_tiles, config.mem_per_slice());
  const auto array = static_cast<std::uint32_t>(std::max<std::uint64_t>({by_pe, by_mem, 1}));

  const std::uint64_t by_capacity = ceil_div(usage.glb_capacity_bytes, config.bank_capacity_bytes);
  const auto by_bandwidth = static_cast<std::uint64_t>(
      std::ceil(usage.glb_bandwidth_bytes_per_s / config.bank_bandwidth_bytes_per_s));
  const std::uint64_t glb =
      std::max<std::uint64_t>({by_capacity, by_bandwidth, 1}) + config.glb_surcharge_slices;

  if (array > config.array_slice_count() || glb > config.glb_banks) {
    throw CapacityError("usage needs (" + std::to_string(array) + "," + std::to_string(glb) +
                        ") slices, platform has (" + std::to_string(config.array_slice_count()) +
                        "," + std::to_string(config.glb_banks) + ")");
  }
  return {array, static_cast<std::uint32_t>(glb)};
}

}  // namespace slicesim
