#include <gtest/gtest.h>

#include "slicesim/catalog.hpp"
#include "slicesim/dpr.hpp"
#include "slicesim/error.hpp"

namespace slicesim {
namespace {

BitstreamImage image(std::uint32_t slices, std::uint64_t words = 4096) { return {"t", "a", words, slices, true}; }

DprParams fast() { return DprParams{DprMechanism::fast_parallel, 1.0, 1, 32, true}; }
DprParams bus(double cost) { return DprParams{DprMechanism::sequential_bus, cost, 1, 32, true}; }

TEST(Dpr, FastParallelIndependentOfSliceCount) {
  for (std::uint32_t n = 1; n <= 8; ++n) EXPECT_EQ(reconfig_cycles(image(n), fast()), 4096u);
  DprParams p = fast();
  p.stream_words_per_cycle_per_slice = 3;
  EXPECT_EQ(reconfig_cycles(image(5), p), 1366u);
}

TEST(Dpr, SequentialBusScalesWithSlices) {
  EXPECT_EQ(reconfig_cycles(image(1), bus(1.0)), 4096u);
  EXPECT_EQ(reconfig_cycles(image(6), bus(1.0)), 6u * 4096u);
  EXPECT_EQ(reconfig_cycles(image(6), bus(1.5)), 36864u);
  EXPECT_EQ(reconfig_cycles(image(1, 3), bus(0.5)), 2u);
}

TEST(Dpr, SingleSliceMechanismsDifferByBusCost) {
  for (double cost : {1.0, 2.0, 4.0}) {
    EXPECT_DOUBLE_EQ(static_cast<double>(reconfig_cycles(image(1), bus(cost))),
                     cost * static_cast<double>(reconfig_cycles(image(1), fast())));
  }
}

TEST(Dpr, RelocationIsPositionInvariant) {
  const BitstreamImage img = image(3);
  for (std::uint32_t start = 0; start + 3 <= 8; ++start) {
    const Region r{RegionId{0}, {start, 3}, {0, 4}};
    const RelocationPlan plan = relocate(img, r);
    EXPECT_EQ(plan.destination, start);
    ASSERT_EQ(plan.slice_targets.size(), 3u);
    for (std::uint32_t i = 0; i < 3; ++i) EXPECT_EQ(plan.slice_targets[i], start + i);
    EXPECT_EQ(plan.configured_words(img), img.total_words());
    EXPECT_EQ(plan.register_write_cycles, 1u);
  }
}

TEST(Dpr, RelocationRejectsLengthMismatch) {
  EXPECT_THROW(relocate(image(3), Region{RegionId{0}, {0, 2}, {0, 4}}), ShapeError);
}

TEST(Dpr, PreloadOverlap) {
  const DprParams p = fast();
  EXPECT_EQ(preload_cycles(image(2), p), 256u);
  EXPECT_EQ(exposed_preload(256, 0, p), 256u);
  EXPECT_EQ(exposed_preload(256, 100, p), 156u);
  EXPECT_EQ(exposed_preload(256, 1000, p), 0u);
  DprParams no = p;
  no.preload_overlaps_execution = false;
  EXPECT_EQ(exposed_preload(256, 1000, no), 256u);
}

TEST(Dpr, ImageOfVariantUsesArraySlices) {
  const Catalog c = Catalog::builtin();
  const auto& v = c.task("resnet18", "conv2_x").variants[1];
  const BitstreamImage img = BitstreamImage::of(v);
  EXPECT_EQ(img.slices, 6u);
  EXPECT_EQ(img.total_words(), 6u * 4096u);
  EXPECT_TRUE(img.region_agnostic);
}

TEST(Dpr, MechanismNames) {
  EXPECT_EQ(parse_dpr_mechanism(to_string(DprMechanism::fast_parallel)), DprMechanism::fast_parallel);
  EXPECT_EQ(parse_dpr_mechanism(to_string(DprMechanism::sequential_bus)), DprMechanism::sequential_bus);
  EXPECT_THROW(parse_dpr_mechanism("axi"), ConfigError);
}

}  // namespace
}  // namespace slicesim
