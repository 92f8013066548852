#include <gtest/gtest.h>

#include <random>

#include "slicesim/error.hpp"
#include "slicesim/platform.hpp"

namespace slicesim {
namespace {

// Smallest slice counts covering the usage, found by scanning upward.
SliceUsage brute_force_slices(const FineGrainedUsage& u, const PlatformConfig& p) {
  std::uint32_t a = 1;
  while (a * p.pe_per_slice() < u.pe_tiles || a * p.mem_per_slice() < u.mem_tiles) ++a;
  std::uint32_t g = 1;
  while (g * p.bank_capacity_bytes < u.glb_capacity_bytes ||
         static_cast<double>(g) * p.bank_bandwidth_bytes_per_s < u.glb_bandwidth_bytes_per_s) {
    ++g;
  }
  return {a, g + p.glb_surcharge_slices};
}

TEST(Platform, DefaultSliceCounts) {
  const auto p = amber_default();
  const auto t = slice_counts(p);
  EXPECT_EQ(t.array_slice_total, 8u);
  EXPECT_EQ(t.glb_slice_total, 32u);
  EXPECT_EQ(p.pe_per_slice(), 48u);
  EXPECT_EQ(p.mem_per_slice(), 16u);
  EXPECT_EQ(p.bitstream_words_per_slice(), 4096u);
}

TEST(Platform, RejectsInvalidConfigs) {
  auto p = amber_default();
  p.cols_per_array_slice = 5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = amber_default();
  p.glb_banks = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = amber_default();
  p.clock_hz = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(DeriveSlices, Examples) {
  const auto p = amber_default();
  EXPECT_EQ(derive_slices({96, 20, 300 * 1024, 0}, p), (SliceUsage{2, 3}));
  EXPECT_EQ(derive_slices({0, 0, 0, 0}, p), (SliceUsage{1, 1}));
  EXPECT_EQ(derive_slices({48, 16, 128 * 1024, 2e9}, p), (SliceUsage{1, 1}));
  EXPECT_EQ(derive_slices({49, 0, 0, 2e9 + 1}, p), (SliceUsage{2, 2}));
  EXPECT_THROW(derive_slices({385, 0, 0, 0}, p), CapacityError);
  EXPECT_THROW(derive_slices({0, 0, 33ull * 128 * 1024, 0}, p), CapacityError);
}

TEST(DeriveSlices, SurchargeAddsGlbSlices) {
  auto p = amber_default();
  p.glb_surcharge_slices = 2;
  EXPECT_EQ(derive_slices({10, 0, 1, 0}, p), (SliceUsage{1, 3}));
  EXPECT_THROW(derive_slices({0, 0, 31ull * 128 * 1024, 0}, p), CapacityError);
}

TEST(DeriveSlices, MatchesBruteForce) {
  const auto p = amber_default();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    FineGrainedUsage u{static_cast<std::uint32_t>(rng() % 385), static_cast<std::uint32_t>(rng() % 129),
                       rng() % (32ull * 128 * 1024 + 1), static_cast<double>(rng() % 64'000'000'001ull)};
    const SliceUsage expected = brute_force_slices(u, p);
    if (expected.array_slices > 8 || expected.glb_slices > 32) {
      EXPECT_THROW(derive_slices(u, p), CapacityError);
    } else {
      EXPECT_EQ(derive_slices(u, p), expected);
    }
  }
}

TEST(DeriveSlices, MonotoneInEveryComponent) {
  const auto p = amber_default();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    FineGrainedUsage u{static_cast<std::uint32_t>(rng() % 300), static_cast<std::uint32_t>(rng() % 100),
                       rng() % (20ull * 128 * 1024), static_cast<double>(rng() % 30'000'000'000ull)};
    FineGrainedUsage v = u;
    switch (rng() % 4) {
      case 0: v.pe_tiles += static_cast<std::uint32_t>(rng() % 50); break;
      case 1: v.mem_tiles += static_cast<std::uint32_t>(rng() % 20); break;
      case 2: v.glb_capacity_bytes += rng() % (4 * 128 * 1024); break;
      default: v.glb_bandwidth_bytes_per_s += static_cast<double>(rng() % 4'000'000'000ull); break;
    }
    const auto a = derive_slices(u, p);
    const auto b = derive_slices(v, p);
    EXPECT_LE(a.array_slices, b.array_slices);
    EXPECT_LE(a.glb_slices, b.glb_slices);
  }
}

TEST(Platform, CycleConversion) {
  const auto p = amber_default();
  EXPECT_DOUBLE_EQ(p.cycles_to_seconds(500'000'000), 1.0);
  EXPECT_EQ(p.seconds_to_cycles(1.0 / 30.0), 16'666'667u);
}

}  // namespace
}  // namespace slicesim
