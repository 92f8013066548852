#include "slicesim/allocator.hpp"

#include <algorithm>
#include <string>

#include "slicesim/error.hpp"

namespace slicesim {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::baseline:
      return "baseline";
    case PolicyKind::fixed:
      return "fixed";
    case PolicyKind::variable:
      return "variable";
    case PolicyKind::flexible:
      return "flexible";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "baseline") return PolicyKind::baseline;
  if (name == "fixed") return PolicyKind::fixed;
  if (name == "variable") return PolicyKind::variable;
  if (name == "flexible") return PolicyKind::flexible;
  throw ConfigError("policy", "unknown region policy '" + std::string(name) + "'");
}

void RegionPolicy::validate(const SliceUsage& totals) const {
  if (kind != PolicyKind::fixed && kind != PolicyKind::variable) return;
  if (unit.array_slices == 0 || unit.glb_slices == 0) throw ConfigError("unit", "unit must be non-empty");
  if (totals.array_slices % unit.array_slices != 0 || totals.glb_slices % unit.glb_slices != 0) {
    throw ConfigError("unit", "unit must divide the platform slice totals evenly");
  }
}

std::optional<std::uint32_t> first_free_run(const std::vector<bool>& bits, std::uint32_t length) {
  if (length == 0 || length > bits.size()) return std::nullopt;
  std::uint32_t run = 0;
  for (std::uint32_t i = 0; i < bits.size(); ++i) {
    run = bits[i] ? 0 : run + 1;
    if (run == length) return i + 1 - length;
  }
  return std::nullopt;
}

std::uint32_t variable_units_needed(const SliceUsage& request, const SliceUsage& unit) {
  return static_cast<std::uint32_t>(std::max(ceil_div(request.array_slices, unit.array_slices),
                                             ceil_div(request.glb_slices, unit.glb_slices)));
}

ResourceState::ResourceState(SliceUsage totals)
    : totals_(totals), array_(totals.array_slices, false), glb_(totals.glb_slices, false) {}

SliceUsage ResourceState::free_counts() const {
  const auto array_used = static_cast<std::uint32_t>(std::count(array_.begin(), array_.end(), true));
  const auto glb_used = static_cast<std::uint32_t>(std::count(glb_.begin(), glb_.end(), true));
  return {totals_.array_slices - array_used, totals_.glb_slices - glb_used};
}

std::uint32_t ResourceState::unit_count(const SliceUsage& unit) const {
  return std::min(totals_.array_slices / unit.array_slices, totals_.glb_slices / unit.glb_slices);
}

bool ResourceState::run_free(const std::vector<bool>& bits, SliceRun run) const {
  if (run.length == 0 || run.end() > bits.size()) return false;
  return std::none_of(bits.begin() + run.start, bits.begin() + run.end(), [](bool b) { return b; });
}

void ResourceState::mark(SliceRun array_run, SliceRun glb_run, bool value) {
  std::fill(array_.begin() + array_run.start, array_.begin() + array_run.end(), value);
  std::fill(glb_.begin() + glb_run.start, glb_.begin() + glb_run.end(), value);
}

Region ResourceState::commit(SliceRun array_run, SliceRun glb_run) {
  Region region{RegionId{next_id_++}, array_run, glb_run};
  mark(array_run, glb_run, true);
  live_.emplace(region.id, region);
  return region;
}

std::optional<Region> ResourceState::allocate(const RegionPolicy& policy, const SliceUsage& request) {
  if (request.array_slices == 0 || request.glb_slices == 0) {
    throw CapacityError("a region needs at least one array-slice and one GLB-slice");
  }
  if (!request.fits_within(totals_)) {
    throw CapacityError("request exceeds platform slice totals");
  }

  switch (policy.kind) {
    case PolicyKind::baseline: {
      if (!live_.empty()) return std::nullopt;
      return commit({0, totals_.array_slices}, {0, totals_.glb_slices});
    }
    case PolicyKind::fixed:
    case PolicyKind::variable: {
      const SliceUsage& unit = policy.unit;
      const std::uint32_t k =
          policy.kind == PolicyKind::fixed ? 1u : variable_units_needed(request, unit);
      if (policy.kind == PolicyKind::fixed && !request.fits_within(unit)) return std::nullopt;
      const std::uint32_t units = unit_count(unit);
      for (std::uint32_t first = 0; first + k <= units; ++first) {
        const SliceRun a{first * unit.array_slices, k * unit.array_slices};
        const SliceRun g{first * unit.glb_slices, k * unit.glb_slices};
        if (run_free(array_, a) && run_free(glb_, g)) return commit(a, g);
      }
      return std::nullopt;
    }
    case PolicyKind::flexible: {
      const auto a = first_free_run(array_, request.array_slices);
      const auto g = first_free_run(glb_, request.glb_slices);
      if (!a || !g) return std::nullopt;
      return commit({*a, request.array_slices}, {*g, request.glb_slices});
    }
  }
  return std::nullopt;
}

bool ResourceState::shape_allowed(const RegionPolicy& policy, const Region& region) const {
  switch (policy.kind) {
    case PolicyKind::baseline:
      return region.array_run == SliceRun{0, totals_.array_slices} &&
             region.glb_run == SliceRun{0, totals_.glb_slices};
    case PolicyKind::fixed:
    case PolicyKind::variable: {
      const SliceUsage& u = policy.unit;
      if (region.array_run.start % u.array_slices != 0 || region.array_run.length % u.array_slices != 0) {
        return false;
      }
      const std::uint32_t first = region.array_run.start / u.array_slices;
      const std::uint32_t k = region.array_run.length / u.array_slices;
      if (policy.kind == PolicyKind::fixed && k != 1) return false;
      return first + k <= unit_count(u) && region.glb_run == SliceRun{first * u.glb_slices, k * u.glb_slices};
    }
    case PolicyKind::flexible:
      return true;
  }
  return false;
}

void ResourceState::claim(const RegionPolicy& policy, const Region& region) {
  if (live_.contains(region.id)) {
    throw SimulationError("claim: region id " + std::to_string(to_underlying(region.id)) + " already live");
  }
  if (!run_free(array_, region.array_run) || !run_free(glb_, region.glb_run)) {
    throw SimulationError("claim: region " + std::to_string(to_underlying(region.id)) +
                          " overlaps live regions or is out of range");
  }
  if (!shape_allowed(policy, region) || (policy.kind == PolicyKind::baseline && !live_.empty())) {
    throw SimulationError("claim: region shape not producible by policy " + std::string(to_string(policy.kind)));
  }
  mark(region.array_run, region.glb_run, true);
  live_.emplace(region.id, region);
  next_id_ = std::max(next_id_, to_underlying(region.id) + 1);
}

void ResourceState::free(RegionId id) {
  auto it = live_.find(id);
  if (it == live_.end()) {
    throw SimulationError("free: region " + std::to_string(to_underlying(id)) + " is not live");
  }
  mark(it->second.array_run, it->second.glb_run, false);
  live_.erase(it);
}

Utilization ResourceState::utilization() const {
  const SliceUsage free = free_counts();
  return {static_cast<double>(totals_.array_slices - free.array_slices) / totals_.array_slices,
          static_cast<double>(totals_.glb_slices - free.glb_slices) / totals_.glb_slices};
}

}  // namespace slicesim
