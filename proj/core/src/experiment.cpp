#include "slicesim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "slicesim/config_io.hpp"
#include "slicesim/error.hpp"
#include "slicesim/random.hpp"
#include "slicesim/scheduler.hpp"

namespace slicesim {

std::uint64_t ScenarioConfig::seed() const {
  return std::visit([](const auto& w) { return w.seed; }, workload);
}

ScenarioConfig ScenarioConfig::with_seed(std::uint64_t seed) const {
  ScenarioConfig copy = *this;
  std::visit([&](auto& w) { w.seed = seed; }, copy.workload);
  return copy;
}

std::string ScenarioConfig::scenario_id() const {
  const std::string text = serialize_scenario(with_seed(0));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return name + ":" + buf;
}

std::vector<std::string> ScenarioConfig::apps() const {
  std::vector<std::string> out;
  if (const auto* cloud = std::get_if<CloudScenario>(&workload)) {
    for (const auto& t : cloud->tenants) out.push_back(t.app_id);
  } else {
    const auto& a = std::get<AutonomousScenario>(workload);
    out.push_back(a.frame_app);
    for (const auto& e : a.events) out.push_back(e.app_id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ScenarioConfig::validate(const Catalog& catalog) const {
  std::visit([&](const auto& w) { w.validate(catalog); }, workload);
  make_scheduler(scheduler);
  if (!(warmup_fraction >= 0 && warmup_fraction < 1)) throw ConfigError("warmup_fraction", "must lie in [0, 1)");
  if (horizon_s && !(*horizon_s > 0)) throw ConfigError("horizon_s", "must be positive");
  if (dpr) {
    if (!(dpr->bus_cycles_per_word > 0)) throw ConfigError("dpr.bus_cycles_per_word", "must be positive");
    if (dpr->stream_words_per_cycle_per_slice == 0) {
      throw ConfigError("dpr.stream_words_per_cycle_per_slice", "must be positive");
    }
    if (dpr->preload_words_per_cycle == 0) throw ConfigError("dpr.preload_words_per_cycle", "must be positive");
  }
}

SliceUsage auto_fixed_unit(const SliceUsage& totals, const Catalog& catalog, const std::vector<std::string>& apps) {
  const std::uint32_t g = std::gcd(totals.array_slices, totals.glb_slices);
  for (std::uint32_t k = g; k >= 1; --k) {
    if (g % k != 0) continue;
    const SliceUsage unit{totals.array_slices / k, totals.glb_slices / k};
    bool all_fit = true;
    for (const auto& app : apps) {
      for (const TaskNode* node : catalog.runnable_tasks(app)) {
        all_fit = all_fit && std::any_of(node->variants.begin(), node->variants.end(),
                                         [&](const TaskVariant& v) { return v.usage.fits_within(unit); });
      }
    }
    if (all_fit) return unit;
  }
  return totals;
}

RegionPolicy policy_for(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform,
                        const Catalog& catalog) {
  const SliceUsage totals = slice_counts(platform).as_usage();
  RegionPolicy policy{kind, {1, 4}};
  if (kind == PolicyKind::fixed) {
    policy.unit = scenario.fixed_unit.value_or(auto_fixed_unit(totals, catalog, scenario.apps()));
  } else if (kind == PolicyKind::variable) {
    policy.unit = scenario.variable_unit;
  }
  policy.validate(totals);
  return policy;
}

DprParams dpr_for(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform) {
  DprParams params = scenario.dpr.value_or(platform.dpr);
  auto it = scenario.mechanism.find(kind);
  params.mechanism = it == scenario.mechanism.end() ? DprMechanism::fast_parallel : it->second;
  return params;
}

RequestStream generate(const ScenarioConfig& scenario, const Catalog& catalog, const PlatformConfig& platform,
                       std::uint64_t seed) {
  const ScenarioConfig seeded = scenario.with_seed(seed);
  if (const auto* cloud = std::get_if<CloudScenario>(&seeded.workload)) return gen_cloud(*cloud, catalog, platform);
  return gen_autonomous(std::get<AutonomousScenario>(seeded.workload), catalog, platform);
}

RunConfig run_config(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform,
                     const Catalog& catalog, std::uint64_t seed) {
  RunConfig rc;
  rc.policy = policy_for(kind, scenario, platform, catalog);
  rc.dpr = dpr_for(kind, scenario, platform);
  rc.seed = seed;
  rc.scenario_id = scenario.scenario_id();
  if (scenario.horizon_s) {
    rc.horizon = platform.seconds_to_cycles(*scenario.horizon_s);
  } else if (const auto* cloud = std::get_if<CloudScenario>(&scenario.workload)) {
    rc.horizon = platform.seconds_to_cycles(cloud->duration_s);
  }
  if (const auto* a = std::get_if<AutonomousScenario>(&scenario.workload)) rc.frame_period = a->frame_period(platform);
  return rc;
}

CellResult run_cell(const PlatformConfig& platform, const Catalog& catalog, const ScenarioConfig& scenario,
                    PolicyKind policy, std::uint64_t seed, const RequestStream* stream) {
  const RunConfig rc = run_config(policy, scenario, platform, catalog, seed);
  auto scheduler = make_scheduler(scenario.scheduler);
  Trace trace = stream ? run(platform, catalog, *stream, *scheduler, rc)
                       : run(platform, catalog, generate(scenario, catalog, platform, seed), *scheduler, rc);
  Summary summary = summarize(trace, {scenario.warmup_fraction});
  return {policy, seed, std::move(trace), std::move(summary)};
}

Summary mean_summary(const std::vector<Summary>& summaries) {
  Summary out;
  if (summaries.empty()) return out;
  const double n = static_cast<double>(summaries.size());
  out.apps = summaries.front().apps;
  for (auto& a : out.apps) {
    a.mean_ntat = a.throughput = a.mean_tat_cycles = 0;
    a.completed = 0;
  }
  std::optional<LatencyBreakdown> lat;
  double lat_total = 0;
  double reconfig_total = 0;
  for (const auto& s : summaries) {
    for (auto& a : out.apps) {
      auto it = std::find_if(s.apps.begin(), s.apps.end(), [&](const AppSummary& x) { return x.app_id == a.app_id; });
      if (it == s.apps.end()) continue;
      a.mean_ntat += it->mean_ntat / n;
      a.throughput += it->throughput / n;
      a.mean_tat_cycles += it->mean_tat_cycles / n;
      a.completed += it->completed;
    }
    out.mean_array_utilization += s.mean_array_utilization / n;
    out.mean_glb_utilization += s.mean_glb_utilization / n;
    out.requests += s.requests;
    out.completed += s.completed;
    out.in_flight += s.in_flight;
    out.queued += s.queued;
    if (s.latency) {
      if (!lat) lat = LatencyBreakdown{};
      lat->frames += s.latency->frames;
      lat->deadline_misses += s.latency->deadline_misses;
      const double total = s.latency->mean_latency_cycles * static_cast<double>(s.latency->frames);
      lat_total += total;
      reconfig_total += s.latency->reconfig_fraction * total;
    }
  }
  if (lat && lat->frames > 0 && lat_total > 0) {
    lat->mean_latency_cycles = lat_total / static_cast<double>(lat->frames);
    lat->reconfig_fraction = reconfig_total / lat_total;
    lat->wait_plus_exec_fraction = 1.0 - lat->reconfig_fraction;
  }
  out.latency = lat;
  return out;
}

}  // namespace slicesim
