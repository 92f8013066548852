#include "slicesim/scheduler.hpp"

#include "slicesim/error.hpp"

namespace slicesim {

namespace {

/// Tries the variants of `q` from highest throughput down on `scratch`.
bool place(const QueuedRequest& q, ResourceState& scratch, const RegionPolicy& policy,
           SchedulerDecision& decision) {
  for (const TaskVariant* v : eligible_variants(*q.node, scratch.free_counts())) {
    if (auto region = scratch.allocate(policy, v->usage)) {
      decision.assignments.push_back({q.id, v, *region});
      return true;
    }
  }
  return false;
}

}  // namespace

SchedulerDecision greedy_on_trigger(const SchedulerContext& ctx, bool pack) {
  SchedulerDecision decision;
  ResourceState scratch = ctx.state;
  for (const auto& q : ctx.queue) {
    if (!q.ready) continue;
    if (place(q, scratch, ctx.policy, decision) && !pack) break;
  }
  return decision;
}

SchedulerDecision FifoSingleScheduler::on_trigger(const SchedulerContext& ctx) {
  SchedulerDecision decision;
  if (!ctx.state.live_regions().empty()) return decision;
  ResourceState scratch = ctx.state;
  for (const auto& q : ctx.queue) {
    if (!q.ready) continue;
    place(q, scratch, ctx.policy, decision);
    break;
  }
  return decision;
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view name) {
  if (name == "greedy") return std::make_unique<GreedyScheduler>(true);
  if (name == "greedy-single") return std::make_unique<GreedyScheduler>(false);
  if (name == "fifo-single") return std::make_unique<FifoSingleScheduler>();
  throw ConfigError("scheduler", "unknown scheduler '" + std::string(name) + "'");
}

}  // namespace slicesim
