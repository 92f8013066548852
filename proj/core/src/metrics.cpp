#include "slicesim/metrics.hpp"

#include <algorithm>
#include <map>

#include "slicesim/error.hpp"

namespace slicesim {

RequestMetrics request_metrics(const Request& request) {
  if (!request.finished() || !request.exec_start || !request.ready) {
    throw NotApplicableError("request " + std::to_string(to_underlying(request.id)) + " has not finished");
  }
  RequestMetrics m;
  m.execution_time = *request.finish - *request.exec_start;
  if (m.execution_time == 0) {
    throw NotApplicableError("request " + std::to_string(to_underlying(request.id)) + " has zero execution time");
  }
  m.wait_time = *request.exec_start - *request.ready;
  m.tat = m.wait_time + m.execution_time;
  m.ntat = static_cast<double>(m.tat) / static_cast<double>(m.execution_time);
  return m;
}

std::vector<FrameLatency> frame_latencies(const Trace& trace) {
  struct Acc {
    Cycles start = 0;
    Cycles end = 0;
    bool complete = true;
    std::vector<std::pair<Cycles, Cycles>> config;
  };
  std::map<std::uint64_t, Acc> frames;
  const Cycles period = trace.config.frame_period;
  for (const auto& r : trace.requests) {
    if (!r.frame) continue;
    Acc& acc = frames[*r.frame];
    acc.start = *r.frame * period;
    if (!r.finished()) {
      acc.complete = false;
      continue;
    }
    acc.end = std::max(acc.end, *r.finish);
    if (*r.exec_start > *r.reconfig_start) acc.config.emplace_back(*r.reconfig_start, *r.exec_start);
  }
  std::vector<FrameLatency> out;
  for (auto& [frame, acc] : frames) {
    if (!acc.complete) continue;
    // Union of configuration intervals.
    std::sort(acc.config.begin(), acc.config.end());
    Cycles covered = 0;
    Cycles cur_lo = 0;
    Cycles cur_hi = 0;
    bool open = false;
    for (const auto& [lo, hi] : acc.config) {
      if (open && lo <= cur_hi) {
        cur_hi = std::max(cur_hi, hi);
      } else {
        if (open) covered += cur_hi - cur_lo;
        cur_lo = lo;
        cur_hi = hi;
        open = true;
      }
    }
    if (open) covered += cur_hi - cur_lo;
    out.push_back({frame, acc.end - acc.start, covered});
  }
  return out;
}

Summary summarize(const Trace& trace, const SummaryOptions& options) {
  Summary s;
  const Cycles window_end = trace.window_end();
  const auto warmup = static_cast<Cycles>(options.warmup_fraction * static_cast<double>(window_end));
  const double window = static_cast<double>(window_end - std::min(warmup, window_end));

  struct Acc {
    double ntat_sum = 0;
    double tat_sum = 0;
    std::size_t n = 0;
    double work = 0;
  };
  std::map<std::string, Acc> apps;
  for (const auto& r : trace.requests) {
    ++s.requests;
    Acc& acc = apps[r.app_id];
    if (r.finished()) {
      ++s.completed;
      const RequestMetrics m = request_metrics(r);
      acc.ntat_sum += m.ntat;
      acc.tat_sum += static_cast<double>(m.tat);
      ++acc.n;
      if (*r.finish >= warmup && *r.finish <= window_end) acc.work += static_cast<double>(r.work);
    } else if (r.started()) {
      ++s.in_flight;
    } else {
      ++s.queued;
    }
  }
  for (const auto& [app, acc] : apps) {
    AppSummary a;
    a.app_id = app;
    a.completed = acc.n;
    a.mean_ntat = acc.n ? acc.ntat_sum / static_cast<double>(acc.n) : 0.0;
    a.mean_tat_cycles = acc.n ? acc.tat_sum / static_cast<double>(acc.n) : 0.0;
    a.throughput = window > 0 ? acc.work / window : 0.0;
    s.apps.push_back(a);
  }

  // Time-weighted utilization over [0, window_end].
  if (window_end > 0) {
    double ua = 0;
    double ug = 0;
    const auto& u = trace.utilization;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].time >= window_end) break;
      const Cycles next = i + 1 < u.size() ? std::min(u[i + 1].time, window_end) : window_end;
      ua += u[i].array_fraction * static_cast<double>(next - u[i].time);
      ug += u[i].glb_fraction * static_cast<double>(next - u[i].time);
    }
    s.mean_array_utilization = ua / static_cast<double>(window_end);
    s.mean_glb_utilization = ug / static_cast<double>(window_end);
  }

  if (trace.config.frame_period > 0) {
    LatencyBreakdown b;
    double total = 0;
    double reconfig = 0;
    for (const auto& f : frame_latencies(trace)) {
      ++b.frames;
      total += static_cast<double>(f.latency);
      reconfig += static_cast<double>(f.reconfig);
      if (f.latency > trace.config.frame_period) ++b.deadline_misses;
    }
    if (b.frames > 0 && total > 0) {
      b.mean_latency_cycles = total / static_cast<double>(b.frames);
      b.reconfig_fraction = reconfig / total;
      b.wait_plus_exec_fraction = 1.0 - b.reconfig_fraction;
    }
    s.latency = b;
  }
  return s;
}

std::string trace_label(const Trace& trace) {
  return std::string(to_string(trace.config.policy.kind)) + "/" + std::string(to_string(trace.config.dpr.mechanism));
}

TraceComparison compare_summaries(const Summary& baseline, const Summary& candidate, std::string label) {
  TraceComparison row;
  row.label = std::move(label);
  for (const auto& b : baseline.apps) {
    auto it = std::find_if(candidate.apps.begin(), candidate.apps.end(),
                           [&](const AppSummary& c) { return c.app_id == b.app_id; });
    if (it == candidate.apps.end()) continue;
    AppComparison c{b.app_id};
    c.ntat_ratio = b.mean_ntat > 0 ? it->mean_ntat / b.mean_ntat : 1.0;
    c.throughput_ratio = b.throughput > 0 ? it->throughput / b.throughput : 1.0;
    row.apps.push_back(c);
  }
  if (baseline.latency && candidate.latency && baseline.latency->mean_latency_cycles > 0) {
    row.latency_ratio = candidate.latency->mean_latency_cycles / baseline.latency->mean_latency_cycles;
  }
  return row;
}

ComparisonReport compare(std::span<const Trace> traces, std::size_t baseline, const SummaryOptions& options) {
  if (baseline >= traces.size()) throw ComparabilityError("baseline index out of range");
  const Trace& base = traces[baseline];
  for (const auto& t : traces) {
    if (t.config.scenario_id != base.config.scenario_id || t.config.seed != base.config.seed) {
      throw ComparabilityError("traces differ in scenario or seed: " + t.config.scenario_id + "#" +
                               std::to_string(t.config.seed) + " vs " + base.config.scenario_id + "#" +
                               std::to_string(base.config.seed));
    }
  }
  const Summary base_summary = summarize(base, options);
  ComparisonReport report;
  report.baseline_label = trace_label(base);
  for (const auto& t : traces) {
    report.rows.push_back(compare_summaries(base_summary, summarize(t, options), trace_label(t)));
  }
  return report;
}

}  // namespace slicesim
