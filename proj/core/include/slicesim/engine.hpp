#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "slicesim/allocator.hpp"
#include "slicesim/catalog.hpp"
#include "slicesim/dpr_params.hpp"
#include "slicesim/platform.hpp"
#include "slicesim/scheduler.hpp"
#include "slicesim/types.hpp"
#include "slicesim/workload.hpp"

namespace slicesim {

/// Equal-time events are processed frees first, then reconfiguration
/// completions, then arrivals.
enum class EventKind : std::uint8_t { task_done = 0, reconfig_done = 1, arrival = 2 };

std::string_view to_string(EventKind kind);

struct Event {
  Cycles time = 0;
  EventKind kind = EventKind::arrival;
  std::uint64_t seq = 0;
  std::size_t request = 0;  ///< index into the run's request table

  friend bool operator>(const Event& a, const Event& b) {
    return std::tie(a.time, a.kind, a.seq) > std::tie(b.time, b.kind, b.seq);
  }
};

/// Lifecycle of one request. `ready` is when its dependencies were all met;
/// the configuration phase runs from `reconfig_start` to `exec_start`.
struct Request {
  RequestId id{};
  std::string tenant_id;
  std::string app_id;
  std::string task_id;
  std::optional<std::uint64_t> frame;
  std::vector<RequestId> depends_on;
  Cycles arrival = 0;
  std::optional<Cycles> ready;
  std::optional<Cycles> reconfig_start;
  std::optional<Cycles> exec_start;
  std::optional<Cycles> finish;
  std::optional<std::string> variant;
  std::optional<Region> region;
  Cycles reconfig_cycles = 0;  ///< bitstream streaming time
  Cycles exposed_preload = 0;  ///< part of the GLB preload left on the critical path
  Cycles exec_cycles = 0;
  std::uint64_t work = 0;

  bool started() const { return reconfig_start.has_value(); }
  bool finished() const { return finish.has_value(); }
  Cycles config_cycles() const { return reconfig_cycles + exposed_preload; }

  friend bool operator==(const Request&, const Request&) = default;
};

enum class LogKind : std::uint8_t { arrival, ready, dispatch, reconfig_done, task_done };

std::string_view to_string(LogKind kind);

struct LogRecord {
  Cycles time = 0;
  LogKind kind = LogKind::arrival;
  RequestId request{};
  std::optional<RegionId> region;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Occupancy after all events at `time`; constant until the next sample.
struct UtilizationSample {
  Cycles time = 0;
  double array_fraction = 0.0;
  double glb_fraction = 0.0;

  friend bool operator==(const UtilizationSample&, const UtilizationSample&) = default;
};

inline constexpr Cycles kNoHorizon = std::numeric_limits<Cycles>::max();

struct RunConfig {
  RegionPolicy policy;
  DprParams dpr;
  std::uint64_t seed = 0;
  Cycles horizon = kNoHorizon;
  /// Identifies the workload; compare() refuses to mix traces with different ids.
  std::string scenario_id;
  /// Frame period of an autonomous scenario, 0 otherwise.
  Cycles frame_period = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Complete record of one run. Fully determined by its inputs.
struct Trace {
  PlatformConfig platform;
  RunConfig config;
  std::string scheduler;
  Cycles end_time = 0;
  std::vector<Request> requests;
  std::vector<UtilizationSample> utilization;
  std::vector<LogRecord> events;

  /// End of the measurement window: the horizon when finite, else the last event.
  Cycles window_end() const { return config.horizon == kNoHorizon ? end_time : config.horizon; }

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Discrete-event core. Owns the resource state and event queue of one run.
class Simulation {
 public:
  /// Validates the stream against the catalog and the policy against the
  /// platform; throws on bad inputs.
  Simulation(const PlatformConfig& platform, const Catalog& catalog, const RequestStream& stream,
             Scheduler& scheduler, RunConfig config);

  /// True when no event remains at or before the horizon.
  bool done() const;
  /// Processes the next event. Throws SimulationError on a time regression
  /// or an infeasible scheduler decision.
  void step();

  Cycles now() const { return now_; }
  const ResourceState& resources() const { return state_; }
  std::span<const Request> requests() const { return requests_; }
  std::span<const QueuedRequest> pending() const { return pending_; }

  Trace take_trace() &&;

 private:
  void push(Cycles time, EventKind kind, std::size_t request);
  void on_arrival(std::size_t idx);
  void on_reconfig_done(std::size_t idx);
  void on_task_done(std::size_t idx);
  void mark_ready_if_possible(std::size_t idx);
  void trigger();
  void dispatch(const Assignment& a);
  void sample();
  void log(LogKind kind, std::size_t idx, std::optional<RegionId> region = std::nullopt);

  PlatformConfig platform_;
  const Catalog& catalog_;
  Scheduler& scheduler_;
  RunConfig config_;
  ResourceState state_;
  Cycles now_ = 0;
  std::uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<Request> requests_;
  std::vector<const TaskNode*> nodes_;
  std::vector<std::vector<std::size_t>> dependents_;
  std::vector<std::size_t> unmet_;
  std::vector<bool> arrived_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<QueuedRequest> pending_;
  std::vector<UtilizationSample> utilization_;
  std::vector<LogRecord> log_;
};

Trace run(const PlatformConfig& platform, const Catalog& catalog, const RequestStream& stream,
          Scheduler& scheduler, const RunConfig& config);

}  // namespace slicesim
