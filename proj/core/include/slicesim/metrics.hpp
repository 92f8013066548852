#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slicesim/engine.hpp"

namespace slicesim {

/// Turn-around figures of one finished request. The configuration phase
/// counts as waiting: wait = exec_start - ready, execution = finish - exec_start.
struct RequestMetrics {
  Cycles wait_time = 0;
  Cycles execution_time = 0;
  Cycles tat = 0;
  double ntat = 1.0;
};

/// Throws NotApplicableError for a request that has not finished.
RequestMetrics request_metrics(const Request& request);

struct AppSummary {
  std::string app_id;
  double mean_ntat = 0.0;
  /// Work units per cycle completed inside the measurement window.
  double throughput = 0.0;
  std::size_t completed = 0;
  double mean_tat_cycles = 0.0;
};

/// Per-frame latency split for frame-driven scenarios, as ratios of the
/// summed frame latencies.
struct LatencyBreakdown {
  std::size_t frames = 0;
  double mean_latency_cycles = 0.0;
  double reconfig_fraction = 0.0;
  double wait_plus_exec_fraction = 0.0;
  std::size_t deadline_misses = 0;  ///< frames whose latency exceeded the frame period
};

struct SummaryOptions {
  /// Leading fraction of the window excluded from throughput.
  double warmup_fraction = 0.1;
};

struct Summary {
  std::vector<AppSummary> apps;  ///< sorted by app_id
  std::optional<LatencyBreakdown> latency;
  double mean_array_utilization = 0.0;  ///< time-weighted over the window
  double mean_glb_utilization = 0.0;
  std::size_t requests = 0;
  std::size_t completed = 0;
  std::size_t in_flight = 0;  ///< started, unfinished at the horizon
  std::size_t queued = 0;     ///< never started
};

Summary summarize(const Trace& trace, const SummaryOptions& options = {});

/// Per-frame latencies (frame start to last finish of its requests) for
/// frames whose requests all finished.
struct FrameLatency {
  std::uint64_t frame = 0;
  Cycles latency = 0;
  Cycles reconfig = 0;  ///< time inside the frame during which one of its requests was configuring
};
std::vector<FrameLatency> frame_latencies(const Trace& trace);

struct AppComparison {
  std::string app_id;
  double ntat_ratio = 1.0;  ///< candidate / baseline
  double throughput_ratio = 1.0;
  double ntat_reduction() const { return 1.0 - ntat_ratio; }
};

struct TraceComparison {
  std::string label;  ///< policy and DPR mechanism of the candidate
  std::vector<AppComparison> apps;
  std::optional<double> latency_ratio;
};

struct ComparisonReport {
  std::string baseline_label;
  std::vector<TraceComparison> rows;
};

/// Ratios of each trace against `traces[baseline]`. Throws ComparabilityError
/// when scenario ids or seeds differ.
ComparisonReport compare(std::span<const Trace> traces, std::size_t baseline = 0,
                         const SummaryOptions& options = {});

/// Ratios between already-computed summaries; used when averaging over seeds.
TraceComparison compare_summaries(const Summary& baseline, const Summary& candidate, std::string label);

std::string trace_label(const Trace& trace);

}  // namespace slicesim
