#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "slicesim/types.hpp"

namespace slicesim {

enum class PolicyKind { baseline, fixed, variable, flexible };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);

/// How execution regions are shaped. `unit` is only used by fixed and
/// variable policies; the k-th unit covers array-slices [k*ua, (k+1)*ua) and
/// GLB-slices [k*ug, (k+1)*ug).
struct RegionPolicy {
  PolicyKind kind = PolicyKind::flexible;
  SliceUsage unit{1, 4};

  /// Throws ConfigError if the unit does not divide `totals` evenly.
  void validate(const SliceUsage& totals) const;

  friend bool operator==(const RegionPolicy&, const RegionPolicy&) = default;
};

/// Half-open run [start, start + length) of slice indices.
struct SliceRun {
  std::uint32_t start = 0;
  std::uint32_t length = 0;

  std::uint32_t end() const { return start + length; }
  friend bool operator==(const SliceRun&, const SliceRun&) = default;
};

struct Region {
  RegionId id{};
  SliceRun array_run;
  SliceRun glb_run;

  SliceUsage usage() const { return {array_run.length, glb_run.length}; }
  friend bool operator==(const Region&, const Region&) = default;
};

struct Utilization {
  double array_fraction = 0.0;
  double glb_fraction = 0.0;
};

/// Occupancy of one platform's slices. A value type: schedulers plan on a
/// copy and the engine replays the plan with claim().
class ResourceState {
 public:
  explicit ResourceState(SliceUsage totals);

  const SliceUsage& totals() const { return totals_; }
  SliceUsage free_counts() const;
  const std::vector<bool>& array_occupancy() const { return array_; }
  const std::vector<bool>& glb_occupancy() const { return glb_; }
  const std::map<RegionId, Region>& live_regions() const { return live_; }

  /// Places a region for `request` under `policy`, first-fit from the lowest
  /// index. Returns nullopt (state untouched) when nothing fits. Throws
  /// CapacityError when the request exceeds the platform totals.
  std::optional<Region> allocate(const RegionPolicy& policy, const SliceUsage& request);

  /// Marks an already-planned region occupied. Throws SimulationError when
  /// the region overlaps live regions, is out of range, reuses a live id or
  /// has a shape `policy` could not have produced.
  void claim(const RegionPolicy& policy, const Region& region);

  /// Throws SimulationError for an unknown id.
  void free(RegionId id);

  Utilization utilization() const;

  /// Number of units a fixed/variable policy exposes on this platform.
  std::uint32_t unit_count(const SliceUsage& unit) const;

  /// Occupancy and live regions only; the id counter is not compared.
  friend bool operator==(const ResourceState& a, const ResourceState& b) {
    return a.totals_ == b.totals_ && a.array_ == b.array_ && a.glb_ == b.glb_ && a.live_ == b.live_;
  }

 private:
  bool run_free(const std::vector<bool>& bits, SliceRun run) const;
  void mark(SliceRun array_run, SliceRun glb_run, bool value);
  Region commit(SliceRun array_run, SliceRun glb_run);
  bool shape_allowed(const RegionPolicy& policy, const Region& region) const;

  SliceUsage totals_;
  std::vector<bool> array_;
  std::vector<bool> glb_;
  std::map<RegionId, Region> live_;
  std::uint64_t next_id_ = 0;
};

/// Lowest-indexed run of `length` clear bits, if any.
std::optional<std::uint32_t> first_free_run(const std::vector<bool>& bits, std::uint32_t length);

/// Units the variable policy merges for `request`.
std::uint32_t variable_units_needed(const SliceUsage& request, const SliceUsage& unit);

}  // namespace slicesim
