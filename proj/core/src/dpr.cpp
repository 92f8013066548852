#include "slicesim/dpr.hpp"

#include <algorithm>
#include <cmath>

#include "slicesim/error.hpp"

namespace slicesim {

BitstreamImage BitstreamImage::of(const TaskVariant& variant) {
  return {variant.task_id, variant.version, variant.bitstream_words, variant.usage.array_slices, true};
}

Cycles reconfig_cycles(const BitstreamImage& image, const DprParams& params) {
  switch (params.mechanism) {
    case DprMechanism::fast_parallel:
      return ceil_div(image.words_per_slice, params.stream_words_per_cycle_per_slice);
    case DprMechanism::sequential_bus:
      return static_cast<Cycles>(
          std::ceil(static_cast<double>(image.total_words()) * params.bus_cycles_per_word));
  }
  return 0;
}

RelocationPlan relocate(const BitstreamImage& image, const Region& target) {
  if (target.array_run.length != image.slices) {
    throw ShapeError(image.task_id + "/" + image.version + ": image spans " + std::to_string(image.slices) +
                     " array-slices, region run has " + std::to_string(target.array_run.length));
  }
  RelocationPlan plan;
  plan.destination = target.array_run.start;
  plan.slice_targets.reserve(image.slices);
  for (std::uint32_t i = 0; i < image.slices; ++i) plan.slice_targets.push_back(target.array_run.start + i);
  return plan;
}

Cycles preload_cycles(const BitstreamImage& image, const DprParams& params) {
  return ceil_div(image.total_words(), params.preload_words_per_cycle);
}

Cycles exposed_preload(Cycles preload, Cycles idle, const DprParams& params) {
  if (!params.preload_overlaps_execution) return preload;
  return preload > idle ? preload - idle : 0;
}

}  // namespace slicesim
