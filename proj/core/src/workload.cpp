#include "slicesim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "slicesim/error.hpp"
#include "slicesim/random.hpp"

namespace slicesim {

using nlohmann::json;

void CloudScenario::validate(const Catalog& catalog) const {
  if (tenants.empty()) throw ConfigError("tenants", "at least one tenant is required");
  if (!(duration_s > 0)) throw ConfigError("duration_s", "must be positive");
  std::set<std::string_view> ids;
  for (std::size_t i = 0; i < tenants.size(); ++i) {
    const auto& t = tenants[i];
    const std::string where = "tenants[" + std::to_string(i) + "]";
    if (t.tenant_id.empty()) throw ConfigError(where + ".id", "missing");
    if (!ids.insert(t.tenant_id).second) throw ConfigError(where + ".id", "duplicate tenant " + t.tenant_id);
    if (!(t.rate_hz > 0) || !std::isfinite(t.rate_hz)) throw ConfigError(where + ".rate_hz", "must be positive");
    if (!catalog.find_app(t.app_id)) throw ConfigError(where + ".app", "unknown application " + t.app_id);
  }
}

void AutonomousScenario::validate(const Catalog& catalog) const {
  if (!(frame_rate > 0)) throw ConfigError("frame_rate", "must be positive");
  if (frames == 0) throw ConfigError("frames", "must be positive");
  if (!catalog.find_app(frame_app)) throw ConfigError("frame_app", "unknown application " + frame_app);
  std::set<std::string_view> ids;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::string where = "events[" + std::to_string(i) + "]";
    if (e.event_id.empty() || !ids.insert(e.event_id).second) throw ConfigError(where + ".id", "missing or duplicate");
    if (!catalog.find_app(e.app_id)) throw ConfigError(where + ".app", "unknown application " + e.app_id);
    if (e.gap_min_frames == 0 || e.gap_min_frames > e.gap_max_frames) {
      throw ConfigError(where + ".gap", "need 1 <= gap_min <= gap_max");
    }
  }
}

Cycles AutonomousScenario::frame_period(const PlatformConfig& platform) const {
  return static_cast<Cycles>(std::llround(platform.clock_hz / frame_rate));
}

namespace {

struct Instance {
  Cycles arrival;
  std::size_t source;     // tenant / event index, for deterministic tie order
  std::uint64_t ordinal;  // per-source sequence number
  std::string tenant_id;
  std::string app_id;
  std::optional<std::uint64_t> frame;
  std::vector<RequestId> extra_deps;  // heads depend on these
};

/// Appends the runnable tasks of `inst.app_id` to `out`, returning the ids of
/// its sink tasks (tasks no other runnable task depends on).
std::vector<RequestId> expand(const Instance& inst, const Catalog& catalog, RequestStream& out) {
  std::map<std::string, RequestId> ids;
  std::set<std::string> depended_on;
  for (const TaskNode* node : catalog.runnable_tasks(inst.app_id)) {
    StreamRequest r;
    r.id = RequestId{out.size()};
    r.tenant_id = inst.tenant_id;
    r.app_id = inst.app_id;
    r.task_id = node->task_id;
    r.arrival = inst.arrival;
    r.frame = inst.frame;
    const auto deps = catalog.effective_dependencies(inst.app_id, node->task_id);
    if (deps.empty()) r.depends_on = inst.extra_deps;
    for (const auto& d : deps) {
      r.depends_on.push_back(ids.at(d));
      depended_on.insert(d);
    }
    ids.emplace(node->task_id, r.id);
    out.push_back(std::move(r));
  }
  std::vector<RequestId> sinks;
  for (const auto& [task, id] : ids) {
    if (!depended_on.contains(task)) sinks.push_back(id);
  }
  std::sort(sinks.begin(), sinks.end());
  return sinks;
}

}  // namespace

RequestStream gen_cloud(const CloudScenario& scenario, const Catalog& catalog, const PlatformConfig& platform) {
  scenario.validate(catalog);
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < scenario.tenants.size(); ++i) {
    const auto& tenant = scenario.tenants[i];
    Rng rng(tenant.seed.value_or(substream_seed(scenario.seed, tenant.tenant_id)));
    double t = 0.0;
    for (std::uint64_t n = 0;; ++n) {
      t += rng.exponential(tenant.rate_hz);
      if (t >= scenario.duration_s) break;
      instances.push_back({platform.seconds_to_cycles(t), i, n, tenant.tenant_id, tenant.app_id, std::nullopt, {}});
    }
  }
  std::sort(instances.begin(), instances.end(), [](const Instance& a, const Instance& b) {
    return std::tie(a.arrival, a.source, a.ordinal) < std::tie(b.arrival, b.source, b.ordinal);
  });
  RequestStream out;
  for (const auto& inst : instances) expand(inst, catalog, out);
  return out;
}

RequestStream gen_autonomous(const AutonomousScenario& scenario, const Catalog& catalog,
                             const PlatformConfig& platform) {
  scenario.validate(catalog);
  const Cycles period = scenario.frame_period(platform);

  // occurrences[f] lists the events firing at frame f, in config order.
  std::vector<std::vector<std::size_t>> occurrences(scenario.frames);
  for (std::size_t e = 0; e < scenario.events.size(); ++e) {
    const auto& ev = scenario.events[e];
    Rng rng(ev.seed.value_or(substream_seed(scenario.seed, ev.event_id)));
    // The phase is drawn as if the previous occurrence were at frame -1.
    std::uint64_t frame = rng.uniform_int(ev.gap_min_frames, ev.gap_max_frames) - 1;
    while (frame < scenario.frames) {
      occurrences[frame].push_back(e);
      frame += rng.uniform_int(ev.gap_min_frames, ev.gap_max_frames);
    }
  }

  RequestStream out;
  std::uint64_t ordinal = 0;
  for (std::uint64_t f = 0; f < scenario.frames; ++f) {
    const Cycles t = f * period;
    const auto sinks =
        expand({t, 0, ordinal++, "frame", scenario.frame_app, f, {}}, catalog, out);
    for (std::size_t e : occurrences[f]) {
      const auto& ev = scenario.events[e];
      expand({t, e + 1, ordinal++, ev.event_id, ev.app_id, f, sinks}, catalog, out);
    }
  }
  return out;
}

void validate_stream(const RequestStream& stream, const Catalog& catalog) {
  std::set<std::uint64_t> seen;
  Cycles last = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& r = stream[i];
    const std::string where = "request " + std::to_string(to_underlying(r.id));
    const auto* app = catalog.find_app(r.app_id);
    if (!app) throw ValidationError(where + ": unknown application " + r.app_id);
    const auto* node = app->find(r.task_id);
    if (!node) throw ValidationError(where + ": unknown task " + r.app_id + "/" + r.task_id);
    if (node->barrier) throw ValidationError(where + ": " + r.task_id + " is a barrier task");
    if (r.arrival < last) throw ValidationError(where + ": arrivals are not sorted");
    last = r.arrival;
    for (RequestId d : r.depends_on) {
      if (!seen.contains(to_underlying(d))) {
        throw ValidationError(where + ": depends on unknown or later request " + std::to_string(to_underlying(d)));
      }
    }
    if (!seen.insert(to_underlying(r.id)).second) throw ValidationError(where + ": duplicate id");
  }
}

namespace {

constexpr const char* kStreamFormat = "slicesim-stream/1";

json to_json(const StreamRequest& r) {
  json deps = json::array();
  for (RequestId d : r.depends_on) deps.push_back(to_underlying(d));
  json j{{"id", to_underlying(r.id)}, {"tenant", r.tenant_id}, {"app", r.app_id},
         {"task", r.task_id},         {"arrival", r.arrival},    {"deps", std::move(deps)}};
  if (r.frame) j["frame"] = *r.frame;
  return j;
}

}  // namespace

std::string serialize_stream(const RequestStream& stream) {
  std::string out = json{{"format", kStreamFormat}, {"requests", stream.size()}}.dump() + "\n";
  for (const auto& r : stream) out += to_json(r).dump() + "\n";
  return out;
}

RequestStream parse_stream(std::string_view text) {
  RequestStream out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "stream line " + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      if (!header) {
        if (j.value("format", "") != kStreamFormat) throw ValidationError(where + ": missing stream header");
        header = true;
        continue;
      }
      StreamRequest r;
      r.id = RequestId{j.at("id").get<std::uint64_t>()};
      r.tenant_id = j.at("tenant").get<std::string>();
      r.app_id = j.at("app").get<std::string>();
      r.task_id = j.at("task").get<std::string>();
      r.arrival = j.at("arrival").get<Cycles>();
      for (const auto& d : j.at("deps")) r.depends_on.push_back(RequestId{d.get<std::uint64_t>()});
      if (j.contains("frame")) r.frame = j.at("frame").get<std::uint64_t>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (!header) throw ValidationError("stream line 1: missing stream header");
  return out;
}

void save_stream(const RequestStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("stream", "cannot write " + path.string());
  out << serialize_stream(stream);
}

RequestStream load_stream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("stream", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_stream(ss.str());
}

}  // namespace slicesim
