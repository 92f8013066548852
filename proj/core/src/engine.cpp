#include "slicesim/engine.hpp"

#include <algorithm>
#include <string>

#include "slicesim/dpr.hpp"
#include "slicesim/error.hpp"

namespace slicesim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::task_done:
      return "task_done";
    case EventKind::reconfig_done:
      return "reconfig_done";
    case EventKind::arrival:
      return "arrival";
  }
  return "?";
}

std::string_view to_string(LogKind kind) {
  switch (kind) {
    case LogKind::arrival:
      return "arrival";
    case LogKind::ready:
      return "ready";
    case LogKind::dispatch:
      return "dispatch";
    case LogKind::reconfig_done:
      return "reconfig_done";
    case LogKind::task_done:
      return "task_done";
  }
  return "?";
}

Simulation::Simulation(const PlatformConfig& platform, const Catalog& catalog, const RequestStream& stream,
                       Scheduler& scheduler, RunConfig config)
    : platform_(platform),
      catalog_(catalog),
      scheduler_(scheduler),
      config_(std::move(config)),
      state_(slice_counts(platform).as_usage()) {
  config_.policy.validate(state_.totals());
  if (config_.horizon == 0) throw ConfigError("horizon", "must be positive");
  validate_stream(stream, catalog);

  const std::size_t n = stream.size();
  requests_.reserve(n);
  nodes_.reserve(n);
  dependents_.resize(n);
  unmet_.resize(n);
  arrived_.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = stream[i];
    index_.emplace(to_underlying(s.id), i);
    Request r;
    r.id = s.id;
    r.tenant_id = s.tenant_id;
    r.app_id = s.app_id;
    r.task_id = s.task_id;
    r.frame = s.frame;
    r.depends_on = s.depends_on;
    r.arrival = s.arrival;
    requests_.push_back(std::move(r));
    nodes_.push_back(&catalog.task(s.app_id, s.task_id));
    unmet_[i] = s.depends_on.size();
    for (RequestId d : s.depends_on) dependents_[index_.at(to_underlying(d))].push_back(i);
    push(s.arrival, EventKind::arrival, i);
  }
  utilization_.push_back({0, 0.0, 0.0});
}

void Simulation::push(Cycles time, EventKind kind, std::size_t request) {
  events_.push(Event{time, kind, seq_++, request});
}

bool Simulation::done() const { return events_.empty() || events_.top().time > config_.horizon; }

void Simulation::log(LogKind kind, std::size_t idx, std::optional<RegionId> region) {
  log_.push_back({now_, kind, requests_[idx].id, region});
}

void Simulation::sample() {
  const Utilization u = state_.utilization();
  if (!utilization_.empty() && utilization_.back().time == now_) {
    utilization_.back() = {now_, u.array_fraction, u.glb_fraction};
  } else {
    utilization_.push_back({now_, u.array_fraction, u.glb_fraction});
  }
}

void Simulation::step() {
  if (events_.empty()) throw SimulationError("step: event queue is empty");
  const Event e = events_.top();
  events_.pop();
  if (e.time < now_) {
    throw SimulationError("time regression: event at cycle " + std::to_string(e.time) + " after cycle " +
                          std::to_string(now_));
  }
  now_ = e.time;
  try {
    switch (e.kind) {
      case EventKind::arrival:
        on_arrival(e.request);
        trigger();
        break;
      case EventKind::reconfig_done:
        on_reconfig_done(e.request);
        break;
      case EventKind::task_done:
        on_task_done(e.request);
        trigger();
        break;
    }
  } catch (const SimulationError& err) {
    throw SimulationError("cycle " + std::to_string(now_) + ", " + std::string(to_string(e.kind)) +
                          " of request " + std::to_string(to_underlying(requests_[e.request].id)) + ": " +
                          err.what());
  }
  sample();
}

void Simulation::mark_ready_if_possible(std::size_t idx) {
  if (!arrived_[idx] || unmet_[idx] != 0 || requests_[idx].ready) return;
  requests_[idx].ready = now_;
  for (auto& q : pending_) {
    if (q.id == requests_[idx].id) q.ready = true;
  }
  log(LogKind::ready, idx);
}

void Simulation::on_arrival(std::size_t idx) {
  arrived_[idx] = true;
  const Request& r = requests_[idx];
  pending_.push_back({r.id, nodes_[idx], r.arrival, false});
  log(LogKind::arrival, idx);
  mark_ready_if_possible(idx);
}

void Simulation::on_reconfig_done(std::size_t idx) {
  Request& r = requests_[idx];
  r.exec_start = now_;
  log(LogKind::reconfig_done, idx, r.region->id);
  push(now_ + r.exec_cycles, EventKind::task_done, idx);
}

void Simulation::on_task_done(std::size_t idx) {
  Request& r = requests_[idx];
  r.finish = now_;
  state_.free(r.region->id);
  log(LogKind::task_done, idx, r.region->id);
  for (std::size_t d : dependents_[idx]) {
    --unmet_[d];
    mark_ready_if_possible(d);
  }
}

void Simulation::trigger() {
  const SchedulerDecision decision =
      scheduler_.on_trigger(SchedulerContext{state_, pending_, config_.policy, catalog_});
  for (const auto& a : decision.assignments) dispatch(a);
}

void Simulation::dispatch(const Assignment& a) {
  auto pos = std::find_if(pending_.begin(), pending_.end(), [&](const QueuedRequest& q) { return q.id == a.request; });
  if (pos == pending_.end()) {
    throw SimulationError("scheduler assigned request " + std::to_string(to_underlying(a.request)) +
                          " which is not pending");
  }
  if (!pos->ready) {
    throw SimulationError("scheduler assigned request " + std::to_string(to_underlying(a.request)) +
                          " before its dependencies finished");
  }
  const std::size_t idx = index_.at(to_underlying(a.request));
  const TaskNode& node = *nodes_[idx];
  const bool own_variant = a.variant && std::any_of(node.variants.begin(), node.variants.end(),
                                                    [&](const TaskVariant& v) { return &v == a.variant; });
  if (!own_variant) throw SimulationError("scheduler chose a variant of another task");
  const bool exact = config_.policy.kind == PolicyKind::flexible;
  if (exact ? a.region.usage() != a.variant->usage : !a.variant->usage.fits_within(a.region.usage())) {
    throw SimulationError("region does not match the footprint of the chosen variant");
  }
  state_.claim(config_.policy, a.region);
  pending_.erase(pos);

  Request& r = requests_[idx];
  r.reconfig_start = now_;
  r.variant = a.variant->version;
  r.region = a.region;
  r.work = a.variant->work;
  r.exec_cycles = exec_cycles(*a.variant);

  const BitstreamImage image = BitstreamImage::of(*a.variant);
  const Region target{a.region.id, {a.region.array_run.start, image.slices}, a.region.glb_run};
  relocate(image, target);
  r.reconfig_cycles = reconfig_cycles(image, config_.dpr);
  if (config_.dpr.mechanism == DprMechanism::fast_parallel) {
    r.exposed_preload = exposed_preload(preload_cycles(image, config_.dpr), now_ - *r.ready, config_.dpr);
  }
  log(LogKind::dispatch, idx, a.region.id);
  push(now_ + r.config_cycles(), EventKind::reconfig_done, idx);
}

Trace Simulation::take_trace() && {
  Trace t;
  t.platform = platform_;
  t.config = config_;
  t.scheduler = scheduler_.name();
  t.end_time = now_;
  t.requests = std::move(requests_);
  t.utilization = std::move(utilization_);
  t.events = std::move(log_);
  return t;
}

Trace run(const PlatformConfig& platform, const Catalog& catalog, const RequestStream& stream,
          Scheduler& scheduler, const RunConfig& config) {
  Simulation sim(platform, catalog, stream, scheduler, config);
  while (!sim.done()) sim.step();
  return std::move(sim).take_trace();
}

}  // namespace slicesim
