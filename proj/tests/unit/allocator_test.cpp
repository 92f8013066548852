#include <gtest/gtest.h>

#include <random>
#include <set>

#include "allocator_oracle.hpp"
#include "slicesim/allocator.hpp"
#include "slicesim/error.hpp"

namespace slicesim {
namespace {

const SliceUsage kTotals{8, 32};
const RegionPolicy kBaseline{PolicyKind::baseline, {1, 4}};
const RegionPolicy kFixed{PolicyKind::fixed, {2, 8}};
const RegionPolicy kVariable{PolicyKind::variable, {1, 4}};
const RegionPolicy kFlexible{PolicyKind::flexible, {1, 4}};

TEST(Allocator, BaselineTakesWholePlatformOnce) {
  ResourceState s(kTotals);
  auto r = s.allocate(kBaseline, {2, 4});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->usage(), kTotals);
  EXPECT_FALSE(s.allocate(kBaseline, {1, 1}));
  s.free(r->id);
  EXPECT_TRUE(s.allocate(kBaseline, {8, 32}));
}

TEST(Allocator, FixedUnitRejectsOversizeAndFillsSlots) {
  ResourceState s(kTotals);
  EXPECT_FALSE(s.allocate(kFixed, {3, 4}));
  for (std::uint32_t i = 0; i < 4; ++i) {
    auto r = s.allocate(kFixed, {1, 1});
    ASSERT_TRUE(r);
    EXPECT_EQ(r->array_run, (SliceRun{2 * i, 2}));
    EXPECT_EQ(r->glb_run, (SliceRun{8 * i, 8}));
  }
  EXPECT_FALSE(s.allocate(kFixed, {1, 1}));
}

TEST(Allocator, VariableRoundsUpToAlignedUnits) {
  ResourceState s(kTotals);
  auto r = s.allocate(kVariable, {2, 7});  // conv2_x/a needs two units by GLB
  ASSERT_TRUE(r);
  EXPECT_EQ(r->array_run, (SliceRun{0, 2}));
  EXPECT_EQ(r->glb_run, (SliceRun{0, 8}));
  auto q = s.allocate(kVariable, {6, 4});
  ASSERT_TRUE(q);
  EXPECT_EQ(q->array_run, (SliceRun{2, 6}));
  EXPECT_EQ(q->glb_run, (SliceRun{8, 24}));
  EXPECT_FALSE(s.allocate(kVariable, {1, 1}));
}

TEST(Allocator, FlexibleExactFootprintFirstFit) {
  ResourceState s(kTotals);
  auto a = s.allocate(kFlexible, {6, 7});
  auto b = s.allocate(kFlexible, {2, 20});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(b->array_run, (SliceRun{6, 2}));
  EXPECT_EQ(b->glb_run, (SliceRun{7, 20}));
  EXPECT_FALSE(s.allocate(kFlexible, {1, 6}));
  EXPECT_DOUBLE_EQ(s.utilization().array_fraction, 1.0);
  EXPECT_DOUBLE_EQ(s.utilization().glb_fraction, 27.0 / 32.0);
}

TEST(Allocator, UtilizationIsExact) {
  ResourceState s(kTotals);
  ASSERT_TRUE(s.allocate(kFlexible, {2, 7}));
  EXPECT_DOUBLE_EQ(s.utilization().array_fraction, 0.25);
  EXPECT_DOUBLE_EQ(s.utilization().glb_fraction, 0.21875);
}

TEST(Allocator, ErrorsOnImpossibleRequests) {
  ResourceState s(kTotals);
  EXPECT_THROW(s.allocate(kFlexible, {0, 1}), CapacityError);
  EXPECT_THROW(s.allocate(kFlexible, {9, 1}), CapacityError);
  EXPECT_THROW(s.allocate(kFlexible, {1, 33}), CapacityError);
  EXPECT_THROW(s.free(RegionId{42}), SimulationError);
}

TEST(Allocator, ClaimRejectsOverlapAndForeignShapes) {
  ResourceState s(kTotals);
  s.claim(kFlexible, Region{RegionId{0}, {0, 2}, {0, 4}});
  EXPECT_THROW(s.claim(kFlexible, Region{RegionId{1}, {1, 2}, {10, 4}}), SimulationError);
  EXPECT_THROW(s.claim(kFlexible, Region{RegionId{0}, {4, 1}, {10, 1}}), SimulationError);
  EXPECT_THROW(s.claim(kVariable, Region{RegionId{2}, {2, 1}, {9, 4}}), SimulationError);
  EXPECT_THROW(s.claim(kFixed, Region{RegionId{3}, {2, 4}, {8, 16}}), SimulationError);
  ResourceState t(kTotals);
  EXPECT_THROW(t.claim(kBaseline, Region{RegionId{0}, {0, 4}, {0, 32}}), SimulationError);
}

TEST(Allocator, UnitMustDivideTotals) {
  EXPECT_THROW((RegionPolicy{PolicyKind::fixed, {3, 8}}.validate(kTotals)), ConfigError);
  EXPECT_THROW((RegionPolicy{PolicyKind::variable, {0, 8}}.validate(kTotals)), ConfigError);
  EXPECT_NO_THROW((RegionPolicy{PolicyKind::variable, {8, 32}}.validate(kTotals)));
}

TEST(Allocator, FirstFreeRun) {
  const std::vector<bool> bits{true, false, false, true, false, false, false};
  EXPECT_EQ(first_free_run(bits, 2), 1u);
  EXPECT_EQ(first_free_run(bits, 3), 4u);
  EXPECT_FALSE(first_free_run(bits, 4));
  EXPECT_FALSE(first_free_run(bits, 0));
}

TEST(AllocatorProperty, FlexibleMatchesExhaustiveSearch) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5000; ++i) {
    const SliceUsage totals{1 + static_cast<std::uint32_t>(rng() % 8), 1 + static_cast<std::uint32_t>(rng() % 16)};
    ResourceState s(totals);
    testing::populate(s, rng, rng() % 6);
    const SliceUsage req{1 + static_cast<std::uint32_t>(rng() % totals.array_slices),
                         1 + static_cast<std::uint32_t>(rng() % totals.glb_slices)};
    const auto expected = testing::exhaustive_flexible(s.array_occupancy(), s.glb_occupancy(), req);
    const auto got = s.allocate(kFlexible, req);
    ASSERT_EQ(got.has_value(), expected.has_value());
    if (got) {
      EXPECT_EQ(got->array_run, (SliceRun{expected->first, req.array_slices}));
      EXPECT_EQ(got->glb_run, (SliceRun{expected->second, req.glb_slices}));
    }
  }
}

// Unit-slot model: a set of occupied unit indices.
std::optional<std::uint32_t> model_units(const std::set<std::uint32_t>& used, std::uint32_t units, std::uint32_t k) {
  for (std::uint32_t first = 0; first + k <= units; ++first) {
    bool ok = true;
    for (std::uint32_t u = first; u < first + k; ++u) ok = ok && !used.contains(u);
    if (ok) return first;
  }
  return std::nullopt;
}

TEST(AllocatorProperty, UnitPoliciesMatchSlotModel) {
  std::mt19937_64 rng(99);
  for (PolicyKind kind : {PolicyKind::fixed, PolicyKind::variable}) {
    for (int trial = 0; trial < 300; ++trial) {
      const RegionPolicy p{kind, {1u << (rng() % 3), 4u << (rng() % 3)}};
      ResourceState s(kTotals);
      std::set<std::uint32_t> used;
      std::map<RegionId, std::pair<std::uint32_t, std::uint32_t>> live;
      const std::uint32_t units = s.unit_count(p.unit);
      for (int op = 0; op < 30; ++op) {
        if (!live.empty() && rng() % 3 == 0) {
          auto it = std::next(live.begin(), static_cast<long>(rng() % live.size()));
          for (std::uint32_t u = it->second.first; u < it->second.first + it->second.second; ++u) used.erase(u);
          s.free(it->first);
          live.erase(it);
          continue;
        }
        const SliceUsage req{1 + static_cast<std::uint32_t>(rng() % 8), 1 + static_cast<std::uint32_t>(rng() % 32)};
        const bool fits = kind == PolicyKind::variable || req.fits_within(p.unit);
        const std::uint32_t k = kind == PolicyKind::fixed ? 1 : variable_units_needed(req, p.unit);
        const auto expected = fits ? model_units(used, units, k) : std::nullopt;
        const auto got = s.allocate(p, req);
        ASSERT_EQ(got.has_value(), expected.has_value());
        if (!got || !expected) continue;
        const std::uint32_t first = *expected;
        EXPECT_EQ(got->array_run.start, first * p.unit.array_slices);
        EXPECT_EQ(got->glb_run.start, first * p.unit.glb_slices);
        EXPECT_TRUE(req.fits_within(got->usage()));
        for (std::uint32_t u = first; u < first + k; ++u) used.insert(u);
        live[got->id] = {first, k};
      }
    }
  }
}

TEST(AllocatorProperty, AllocateThenFreeRestoresState) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    ResourceState s(kTotals);
    testing::populate(s, rng, rng() % 5);
    const ResourceState before = s;
    for (const RegionPolicy& p : {kFlexible, kVariable, kFixed}) {
      const SliceUsage req{1 + static_cast<std::uint32_t>(rng() % 8), 1 + static_cast<std::uint32_t>(rng() % 32)};
      if (auto r = s.allocate(p, req)) {
        s.free(r->id);
        EXPECT_EQ(s, before);
      }
    }
  }
}

TEST(AllocatorProperty, LiveRegionsNeverOverlap) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    ResourceState s(kTotals);
    for (int op = 0; op < 20; ++op) {
      const SliceUsage req{1 + static_cast<std::uint32_t>(rng() % 4), 1 + static_cast<std::uint32_t>(rng() % 12)};
      (void)s.allocate(kFlexible, req);
    }
    std::vector<int> a(8), g(32);
    for (const auto& [id, r] : s.live_regions()) {
      for (auto k = r.array_run.start; k < r.array_run.end(); ++k) ++a[k];
      for (auto k = r.glb_run.start; k < r.glb_run.end(); ++k) ++g[k];
    }
    for (std::uint32_t k = 0; k < 8; ++k) EXPECT_EQ(a[k] == 1, s.array_occupancy()[k]);
    for (std::uint32_t k = 0; k < 32; ++k) EXPECT_EQ(g[k] == 1, s.glb_occupancy()[k]);
    for (int v : a) EXPECT_LE(v, 1);
    for (int v : g) EXPECT_LE(v, 1);
  }
}

}  // namespace
}  // namespace slicesim
