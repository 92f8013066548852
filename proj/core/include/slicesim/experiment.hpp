#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slicesim/allocator.hpp"
#include "slicesim/catalog.hpp"
#include "slicesim/engine.hpp"
#include "slicesim/metrics.hpp"
#include "slicesim/platform.hpp"
#include "slicesim/workload.hpp"

namespace slicesim {

/// Everything about a workload study except the policy and seed under test.
struct ScenarioConfig {
  std::string name = "scenario";
  std::variant<CloudScenario, AutonomousScenario> workload;
  std::string scheduler = "greedy";
  /// nullopt selects the smallest even division of the platform that holds
  /// some variant of every task the workload uses.
  std::optional<SliceUsage> fixed_unit;
  SliceUsage variable_unit{1, 4};
  /// DPR mechanism per region policy; policies not listed use fast_parallel.
  std::map<PolicyKind, DprMechanism> mechanism{{PolicyKind::baseline, DprMechanism::sequential_bus}};
  /// Replaces the platform's DPR constants (mechanism is taken from `mechanism`).
  std::optional<DprParams> dpr;
  double warmup_fraction = 0.1;
  /// Simulation horizon; nullopt means the cloud duration, or run to drain
  /// for frame-driven workloads.
  std::optional<double> horizon_s;

  bool is_cloud() const { return std::holds_alternative<CloudScenario>(workload); }
  std::uint64_t seed() const;
  /// Copy with the workload seed replaced.
  ScenarioConfig with_seed(std::uint64_t seed) const;
  /// Stable fingerprint of the workload description (seed excluded).
  std::string scenario_id() const;
  /// Applications the workload can submit.
  std::vector<std::string> apps() const;

  void validate(const Catalog& catalog) const;
};

SliceUsage auto_fixed_unit(const SliceUsage& totals, const Catalog& catalog, const std::vector<std::string>& apps);

RegionPolicy policy_for(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform,
                        const Catalog& catalog);
DprParams dpr_for(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform);

/// Stream for `scenario` with its workload seed replaced by `seed`.
RequestStream generate(const ScenarioConfig& scenario, const Catalog& catalog, const PlatformConfig& platform,
                       std::uint64_t seed);

RunConfig run_config(PolicyKind kind, const ScenarioConfig& scenario, const PlatformConfig& platform,
                     const Catalog& catalog, std::uint64_t seed);

struct CellResult {
  PolicyKind policy;
  std::uint64_t seed;
  Trace trace;
  Summary summary;
};

/// One (policy, seed) cell. When `stream` is given it replaces generation.
CellResult run_cell(const PlatformConfig& platform, const Catalog& catalog, const ScenarioConfig& scenario,
                    PolicyKind policy, std::uint64_t seed, const RequestStream* stream = nullptr);

/// Per-app means over a set of summaries (one per seed).
Summary mean_summary(const std::vector<Summary>& summaries);

}  // namespace slicesim
