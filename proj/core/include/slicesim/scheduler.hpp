#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slicesim/allocator.hpp"
#include "slicesim/catalog.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

/// A request waiting to start. `ready` is false while dependencies are
/// still outstanding.
struct QueuedRequest {
  RequestId id{};
  const TaskNode* node = nullptr;
  Cycles arrival = 0;
  bool ready = false;
};

struct Assignment {
  RequestId request{};
  const TaskVariant* variant = nullptr;
  Region region;
};

/// Assignments must be feasible when claimed in order against the offered state.
struct SchedulerDecision {
  std::vector<Assignment> assignments;

  bool empty() const { return assignments.empty(); }
};

/// What a scheduler sees at a trigger point. `queue` is in FIFO order
/// (arrival, then request id).
struct SchedulerContext {
  const ResourceState& state;
  std::span<const QueuedRequest> queue;
  const RegionPolicy& policy;
  const Catalog& catalog;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  virtual SchedulerDecision on_trigger(const SchedulerContext& ctx) = 0;
};

/// Scans the queue in order; each ready request gets its highest-throughput
/// variant the allocator can place. With `pack` set the scan continues after
/// a placement, otherwise it stops at the first one.
SchedulerDecision greedy_on_trigger(const SchedulerContext& ctx, bool pack = true);

class GreedyScheduler final : public Scheduler {
 public:
  explicit GreedyScheduler(bool pack = true) : pack_(pack) {}
  std::string name() const override { return pack_ ? "greedy" : "greedy-single"; }
  SchedulerDecision on_trigger(const SchedulerContext& ctx) override { return greedy_on_trigger(ctx, pack_); }

 private:
  bool pack_;
};

/// One task on the fabric at a time: the oldest ready request, on its
/// highest-throughput variant, only when no region is live.
class FifoSingleScheduler final : public Scheduler {
 public:
  std::string name() const override { return "fifo-single"; }
  SchedulerDecision on_trigger(const SchedulerContext& ctx) override;
};

/// "greedy", "greedy-single" or "fifo-single"; throws ConfigError otherwise.
std::unique_ptr<Scheduler> make_scheduler(std::string_view name);

}  // namespace slicesim
