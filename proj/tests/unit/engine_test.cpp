#include <gtest/gtest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "slicesim/error.hpp"
#include "slicesim/workload.hpp"

namespace slicesim {
namespace {

using testing::run_config_for;
using testing::simulate;
using testing::StreamBuilder;

constexpr Cycles kHarrisCExec = 2073600 / 4;

TEST(Engine, SingleRequestFastDprTimeline) {
  StreamBuilder b;
  b.add("harris", "harris", 100);
  const Trace t = simulate(b.stream, run_config_for(PolicyKind::flexible));
  const Request& r = t.requests.at(0);
  EXPECT_EQ(*r.variant, "c");
  EXPECT_EQ(*r.ready, 100u);
  EXPECT_EQ(*r.reconfig_start, 100u);
  EXPECT_EQ(r.reconfig_cycles, 4096u);
  EXPECT_EQ(r.exposed_preload, 7u * 4096u / 32u);
  EXPECT_EQ(*r.exec_start, 100u + 4096u + 896u);
  EXPECT_EQ(*r.finish, *r.exec_start + kHarrisCExec);
  EXPECT_EQ(t.end_time, *r.finish);
}

TEST(Engine, SingleRequestBusDprTimeline) {
  StreamBuilder b;
  b.add("harris", "harris", 0);
  RunConfig c = run_config_for(PolicyKind::baseline, DprMechanism::sequential_bus);
  c.dpr.bus_cycles_per_word = 2.0;
  const Trace t = simulate(b.stream, c);
  const Request& r = t.requests.at(0);
  EXPECT_EQ(r.reconfig_cycles, 2u * 7u * 4096u);
  EXPECT_EQ(r.exposed_preload, 0u);
  EXPECT_EQ(r.region->usage(), (SliceUsage{8, 32}));
}

TEST(Engine, CompletionFreesBeforeSimultaneousArrival) {
  StreamBuilder b;
  b.add("harris", "harris", 0);
  const Trace first = simulate(b.stream, run_config_for(PolicyKind::baseline));
  const Cycles done = *first.requests[0].finish;
  b.add("harris", "harris", done);
  const Trace t = simulate(b.stream, run_config_for(PolicyKind::baseline));
  EXPECT_EQ(*t.requests[1].reconfig_start, done);
}

TEST(Engine, DependentWaitsForPredecessor) {
  StreamBuilder b;
  b.add("resnet18", "conv2_x", 0).add("resnet18", "conv3_x", 0, {0});
  const Trace t = simulate(b.stream, run_config_for(PolicyKind::flexible));
  EXPECT_EQ(*t.requests[1].ready, *t.requests[0].finish);
  EXPECT_GE(*t.requests[1].reconfig_start, *t.requests[0].finish);
}

TEST(Engine, IdleTimeHidesPreload) {
  // The second harris waits behind a full-width first one; its preload overlaps the wait.
  StreamBuilder b;
  b.add("harris", "harris", 0).add("harris", "harris", 0);
  const Trace t = simulate(b.stream, run_config_for(PolicyKind::fixed, DprMechanism::fast_parallel, {8, 32}));
  EXPECT_EQ(t.requests[0].exposed_preload, 896u);
  EXPECT_EQ(t.requests[1].exposed_preload, 0u);
}

TEST(Engine, HorizonLeavesWorkInFlight) {
  StreamBuilder b;
  b.add("harris", "harris", 0).add("harris", "harris", 0).add("harris", "harris", 0);
  RunConfig c = run_config_for(PolicyKind::baseline);
  c.horizon = kHarrisCExec + 10000;
  const Trace t = simulate(b.stream, c);
  EXPECT_TRUE(t.requests[0].finished());
  EXPECT_TRUE(t.requests[1].started());
  EXPECT_FALSE(t.requests[1].finished());
  EXPECT_FALSE(t.requests[2].started());
  EXPECT_EQ(t.window_end(), c.horizon);
}

class RogueScheduler : public Scheduler {
 public:
  std::string name() const override { return "rogue"; }
  SchedulerDecision on_trigger(const SchedulerContext& ctx) override {
    SchedulerDecision d;
    for (const auto& q : ctx.queue) {
      d.assignments.push_back({q.id, &q.node->variants.front(), Region{RegionId{0}, {0, 2}, {0, 4}}});
    }
    return d;
  }
};

TEST(Engine, InfeasibleDecisionFailsWithContext) {
  StreamBuilder b;
  b.add("harris", "harris", 0).add("harris", "harris", 5);
  RogueScheduler rogue;
  try {
    run(amber_default(), Catalog::builtin(), b.stream, rogue, run_config_for(PolicyKind::flexible));
    FAIL() << "expected a simulation error";
  } catch (const SimulationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("cycle 5"), std::string::npos) << what;
    EXPECT_NE(what.find("request 1"), std::string::npos) << what;
  }
}

TEST(Engine, RejectsInvalidStream) {
  StreamBuilder b;
  b.add("resnet18", "fc", 0);
  EXPECT_THROW(simulate(b.stream, run_config_for(PolicyKind::flexible)), ValidationError);
}

// Invariants checked on every trace produced by the property test below.
void check_trace(const Trace& t, const RequestStream& stream) {
  ASSERT_EQ(t.requests.size(), stream.size());
  std::map<std::uint64_t, const Request*> by_id;
  for (const auto& r : t.requests) by_id[to_underlying(r.id)] = &r;
  for (const auto& r : t.requests) {
    ASSERT_TRUE(r.finished()) << to_underlying(r.id);
    EXPECT_LE(r.arrival, *r.ready);
    EXPECT_LE(*r.ready, *r.reconfig_start);
    EXPECT_EQ(*r.exec_start - *r.reconfig_start, r.config_cycles());
    EXPECT_EQ(*r.finish - *r.exec_start, r.exec_cycles);
    EXPECT_GE(r.exec_cycles, 1u);
    Cycles deps_done = r.arrival;
    for (RequestId d : r.depends_on) deps_done = std::max(deps_done, *by_id.at(to_underlying(d))->finish);
    EXPECT_EQ(*r.ready, deps_done);
  }
  Cycles last = 0;
  std::map<std::uint64_t, int> dispatches;
  for (const auto& e : t.events) {
    EXPECT_GE(e.time, last);
    last = e.time;
    if (e.kind == LogKind::dispatch) ++dispatches[to_underlying(e.request)];
  }
  EXPECT_EQ(dispatches.size(), stream.size());
  for (const auto& [id, n] : dispatches) EXPECT_EQ(n, 1) << id;

  // Regions live at the same time never share a slice.
  for (std::size_t i = 0; i < t.requests.size(); ++i) {
    for (std::size_t j = i + 1; j < t.requests.size(); ++j) {
      const Request& a = t.requests[i];
      const Request& b = t.requests[j];
      const bool overlap_time = *a.reconfig_start < *b.finish && *b.reconfig_start < *a.finish;
      if (!overlap_time) continue;
      const bool share_array = a.region->array_run.start < b.region->array_run.end() &&
                               b.region->array_run.start < a.region->array_run.end();
      const bool share_glb = a.region->glb_run.start < b.region->glb_run.end() &&
                             b.region->glb_run.start < a.region->glb_run.end();
      EXPECT_FALSE(share_array || share_glb) << i << " vs " << j;
      if (t.config.policy.kind == PolicyKind::baseline) ADD_FAILURE() << "baseline ran two tasks at once";
    }
  }
}

TEST(EngineProperty, RandomCloudStreamsKeepInvariants) {
  const Catalog catalog = Catalog::builtin();
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    CloudScenario s;
    s.tenants = {{"m", "mobilenet", 40, std::nullopt},
                 {"r", "resnet18", 15, std::nullopt},
                 {"c", "camera_pipeline", 80, std::nullopt},
                 {"h", "harris", 80, std::nullopt}};
    s.duration_s = 0.15;
    s.seed = seed;
    const RequestStream stream = gen_cloud(s, catalog, amber_default());
    for (PolicyKind kind : {PolicyKind::baseline, PolicyKind::fixed, PolicyKind::variable, PolicyKind::flexible}) {
      const SliceUsage unit = kind == PolicyKind::fixed ? SliceUsage{8, 32} : SliceUsage{1, 4};
      const Trace t = simulate(stream, run_config_for(kind, DprMechanism::fast_parallel, unit));
      check_trace(t, stream);
    }
  }
}

TEST(EngineProperty, ConservationUnderHorizon) {
  const Catalog catalog = Catalog::builtin();
  CloudScenario s;
  s.tenants = {{"m", "mobilenet", 200, std::nullopt}, {"h", "harris", 300, std::nullopt}};
  s.duration_s = 0.5;
  const RequestStream stream = gen_cloud(s, catalog, amber_default());
  RunConfig c = run_config_for(PolicyKind::flexible);
  c.horizon = amber_default().seconds_to_cycles(0.25);
  const Trace t = simulate(stream, c);
  std::size_t finished = 0;
  std::size_t in_flight = 0;
  std::size_t waiting = 0;
  for (const auto& r : t.requests) {
    if (r.finished()) {
      ++finished;
      EXPECT_LE(*r.finish, c.horizon);
    } else if (r.started()) {
      ++in_flight;
    } else {
      ++waiting;
    }
  }
  EXPECT_EQ(finished + in_flight + waiting, stream.size());
  EXPECT_GT(waiting, 0u);
  EXPECT_GT(finished, 0u);
}

TEST(EngineProperty, IdenticalRunsProduceIdenticalTraces) {
  const Catalog catalog = Catalog::builtin();
  CloudScenario s;
  s.tenants = {{"m", "mobilenet", 40, std::nullopt}, {"h", "harris", 80, std::nullopt}};
  s.duration_s = 0.2;
  const RequestStream stream = gen_cloud(s, catalog, amber_default());
  EXPECT_EQ(simulate(stream, run_config_for(PolicyKind::flexible)),
            simulate(stream, run_config_for(PolicyKind::flexible)));
}

}  // namespace
}  // namespace slicesim
