#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "slicesim/config_io.hpp"
#include "slicesim/error.hpp"
#include "slicesim/experiment.hpp"

namespace slicesim {
namespace {

ScenarioConfig cloud(std::vector<TenantSpec> tenants) {
  ScenarioConfig s;
  s.name = "t";
  CloudScenario c;
  c.tenants = std::move(tenants);
  c.duration_s = 0.2;
  s.workload = c;
  return s;
}

TEST(AutoFixedUnit, SmallestEvenDivisionHoldingEveryTask) {
  const Catalog c = Catalog::builtin();
  const SliceUsage totals{8, 32};
  // conv5_x needs 20 GLB-slices, so only the whole platform fits ResNet-18.
  EXPECT_EQ(auto_fixed_unit(totals, c, {"resnet18", "harris"}), (SliceUsage{8, 32}));
  EXPECT_EQ(auto_fixed_unit(totals, c, {"harris"}), (SliceUsage{2, 8}));
  EXPECT_EQ(auto_fixed_unit(totals, c, {"mobilenet"}), (SliceUsage{2, 8}));
  EXPECT_EQ(auto_fixed_unit(totals, c, {"camera_pipeline"}), (SliceUsage{4, 16}));
}

TEST(Experiment, PolicyAndMechanismDefaults) {
  const Catalog c = Catalog::builtin();
  const ScenarioConfig s = cloud({{"h", "harris", 10, std::nullopt}});
  const auto p = amber_default();
  EXPECT_EQ(dpr_for(PolicyKind::baseline, s, p).mechanism, DprMechanism::sequential_bus);
  EXPECT_EQ(dpr_for(PolicyKind::flexible, s, p).mechanism, DprMechanism::fast_parallel);
  EXPECT_EQ(policy_for(PolicyKind::fixed, s, p, c).unit, (SliceUsage{2, 8}));
  EXPECT_EQ(policy_for(PolicyKind::variable, s, p, c).unit, (SliceUsage{1, 4}));
  ScenarioConfig bad = s;
  bad.variable_unit = {3, 4};
  EXPECT_THROW(policy_for(PolicyKind::variable, bad, p, c), ConfigError);
}

TEST(Experiment, HorizonDefaultsToDuration) {
  const ScenarioConfig s = cloud({{"h", "harris", 10, std::nullopt}});
  const auto rc = run_config(PolicyKind::flexible, s, amber_default(), Catalog::builtin(), 3);
  EXPECT_EQ(rc.horizon, 100'000'000u);
  EXPECT_EQ(rc.seed, 3u);
  EXPECT_EQ(rc.frame_period, 0u);
}

TEST(Experiment, ScenarioIdIgnoresSeedOnly) {
  const ScenarioConfig s = cloud({{"h", "harris", 10, std::nullopt}});
  EXPECT_EQ(s.scenario_id(), s.with_seed(99).scenario_id());
  ScenarioConfig other = cloud({{"h", "harris", 11, std::nullopt}});
  EXPECT_NE(s.scenario_id(), other.scenario_id());
}

TEST(Experiment, CellsAreDeterministic) {
  const ScenarioConfig s = cloud({{"h", "harris", 50, std::nullopt}, {"m", "mobilenet", 20, std::nullopt}});
  const Catalog c = Catalog::builtin();
  const auto a = run_cell(amber_default(), c, s, PolicyKind::variable, 4);
  const auto b = run_cell(amber_default(), c, s, PolicyKind::variable, 4);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(summary_json(a.trace, a.summary), summary_json(b.trace, b.summary));
}

TEST(Experiment, MeanSummaryAveragesApps) {
  Summary x;
  x.apps = {{"a", 1.0, 2.0, 3, 10.0}};
  x.mean_array_utilization = 0.2;
  Summary y;
  y.apps = {{"a", 3.0, 4.0, 5, 30.0}};
  y.mean_array_utilization = 0.4;
  const Summary m = mean_summary({x, y});
  ASSERT_EQ(m.apps.size(), 1u);
  EXPECT_DOUBLE_EQ(m.apps[0].mean_ntat, 2.0);
  EXPECT_DOUBLE_EQ(m.apps[0].throughput, 3.0);
  EXPECT_DOUBLE_EQ(m.mean_array_utilization, 0.3);
}

}  // namespace
}  // namespace slicesim
