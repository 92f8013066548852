#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/allocator.hpp"
#include "slicesim/catalog.hpp"
#include "slicesim/dpr_params.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

/// Configuration image of one variant. Images are compiled against the
/// leftmost region and relocated at load time.
struct BitstreamImage {
  std::string task_id;
  std::string version;
  std::uint64_t words_per_slice = 0;
  std::uint32_t slices = 0;
  bool region_agnostic = true;

  static BitstreamImage of(const TaskVariant& variant);
  std::uint64_t total_words() const { return words_per_slice * slices; }
};

/// Cycles to stream `image` into its region.
///   fast_parallel:  ceil(words_per_slice / stream rate); slices load concurrently.
///   sequential_bus: ceil(words_per_slice * slices * bus_cycles_per_word).
Cycles reconfig_cycles(const BitstreamImage& image, const DprParams& params);

/// Binding of an image's per-slice streams onto a concrete array run.
struct RelocationPlan {
  std::uint32_t destination = 0;            ///< value written to the relocation register
  std::vector<std::uint32_t> slice_targets;  ///< target array-slice of stream i
  Cycles register_write_cycles = 1;

  std::uint64_t configured_words(const BitstreamImage& image) const {
    return image.words_per_slice * slice_targets.size();
  }
};

/// Throws ShapeError when the region's array run length differs from image.slices.
RelocationPlan relocate(const BitstreamImage& image, const Region& target);

/// Cycles to stage `image` from the host into GLB headroom.
Cycles preload_cycles(const BitstreamImage& image, const DprParams& params);

/// Portion of a preload that lands on the critical path when the request has
/// already waited `idle` cycles since the preload could start.
Cycles exposed_preload(Cycles preload, Cycles idle, const DprParams& params);

}  // namespace slicesim
