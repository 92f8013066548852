#pragma once

#include <cstdint>
#include <string_view>

namespace slicesim {

enum class DprMechanism {
  sequential_bus,  ///< host writes configuration words one at a time over a register bus
  fast_parallel,   ///< each array-slice is streamed from its own GLB bank concurrently
};

std::string_view to_string(DprMechanism m);
DprMechanism parse_dpr_mechanism(std::string_view name);

/// Cost constants for dynamic partial reconfiguration. The absolute values are
/// calibration knobs; only the ratio between the two mechanisms is meaningful.
struct DprParams {
  DprMechanism mechanism = DprMechanism::fast_parallel;
  /// Average bus cycles per configuration word (may be fractional).
  double bus_cycles_per_word = 1.0;
  std::uint32_t stream_words_per_cycle_per_slice = 1;
  /// Host to GLB words per cycle when staging bitstreams ahead of use.
  std::uint32_t preload_words_per_cycle = 32;
  bool preload_overlaps_execution = true;

  friend bool operator==(const DprParams&, const DprParams&) = default;
};

}  // namespace slicesim
