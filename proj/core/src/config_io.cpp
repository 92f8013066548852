#include "slicesim/config_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "slicesim/error.hpp"
#include "slicesim/experiment.hpp"

namespace slicesim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), "cannot write file");
  out << text;
}

namespace {

json parse_document(std::string_view text, const char* what) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("", std::string(what) + " must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string(what) + " is not valid JSON: " + e.what());
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, e.what());
  }
}

DprParams parse_dpr(const json& j, DprParams params, const std::string& prefix) {
  if (j.contains("mechanism")) {
    try {
      params.mechanism = parse_dpr_mechanism(j.at("mechanism").get<std::string>());
    } catch (const json::exception& e) {
      throw ConfigError(prefix + "mechanism", e.what());
    }
  }
  read(j, "bus_cycles_per_word", params.bus_cycles_per_word, prefix);
  read(j, "stream_words_per_cycle_per_slice", params.stream_words_per_cycle_per_slice, prefix);
  read(j, "preload_words_per_cycle", params.preload_words_per_cycle, prefix);
  read(j, "preload_overlaps_execution", params.preload_overlaps_execution, prefix);
  return params;
}

ordered_json dpr_json(const DprParams& p) {
  return {{"mechanism", std::string(to_string(p.mechanism))},
          {"bus_cycles_per_word", p.bus_cycles_per_word},
          {"stream_words_per_cycle_per_slice", p.stream_words_per_cycle_per_slice},
          {"preload_words_per_cycle", p.preload_words_per_cycle},
          {"preload_overlaps_execution", p.preload_overlaps_execution}};
}

SliceUsage parse_unit(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected [array_slices, glb_slices]");
  try {
    return {j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

PlatformConfig parse_platform(std::string_view json_text) {
  const json j = parse_document(json_text, "platform");
  PlatformConfig p = amber_default();
  read(j, "name", p.name, "");
  read(j, "columns", p.columns, "");
  read(j, "rows", p.rows, "");
  read(j, "pe_tiles", p.pe_tiles, "");
  read(j, "mem_tiles", p.mem_tiles, "");
  read(j, "cols_per_array_slice", p.cols_per_array_slice, "");
  read(j, "glb_banks", p.glb_banks, "");
  read(j, "bank_capacity_bytes", p.bank_capacity_bytes, "");
  read(j, "bank_bandwidth_bytes_per_s", p.bank_bandwidth_bytes_per_s, "");
  read(j, "clock_hz", p.clock_hz, "");
  read(j, "glb_surcharge_slices", p.glb_surcharge_slices, "");
  read(j, "words_per_tile", p.words_per_tile, "");
  if (j.contains("dpr")) p.dpr = parse_dpr(j.at("dpr"), p.dpr, "dpr.");
  p.validate();
  return p;
}

PlatformConfig load_platform_source(std::string_view source) {
  if (source.empty() || source == "amber-default") return amber_default();
  return parse_platform(read_text_file(std::filesystem::path(source)));
}

std::string serialize_platform(const PlatformConfig& p) {
  ordered_json j{{"name", p.name},
                 {"columns", p.columns},
                 {"rows", p.rows},
                 {"pe_tiles", p.pe_tiles},
                 {"mem_tiles", p.mem_tiles},
                 {"cols_per_array_slice", p.cols_per_array_slice},
                 {"glb_banks", p.glb_banks},
                 {"bank_capacity_bytes", p.bank_capacity_bytes},
                 {"bank_bandwidth_bytes_per_s", p.bank_bandwidth_bytes_per_s},
                 {"clock_hz", p.clock_hz},
                 {"glb_surcharge_slices", p.glb_surcharge_slices},
                 {"words_per_tile", p.words_per_tile},
                 {"dpr", dpr_json(p.dpr)}};
  return j.dump(2) + "\n";
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  const json j = parse_document(json_text, "scenario");
  ScenarioConfig s;
  read(j, "name", s.name, "");
  std::string kind;
  read(j, "kind", kind, "");
  std::uint64_t seed = 1;
  read(j, "seed", seed, "");

  if (kind == "cloud") {
    CloudScenario c;
    c.seed = seed;
    read(j, "duration_s", c.duration_s, "");
    if (!j.contains("tenants") || !j["tenants"].is_array()) throw ConfigError("tenants", "expected an array");
    for (std::size_t i = 0; i < j["tenants"].size(); ++i) {
      const json& jt = j["tenants"][i];
      const std::string prefix = "tenants[" + std::to_string(i) + "].";
      TenantSpec t;
      read(jt, "id", t.tenant_id, prefix);
      read(jt, "app", t.app_id, prefix);
      read(jt, "rate_hz", t.rate_hz, prefix);
      if (jt.contains("seed")) {
        std::uint64_t ts = 0;
        read(jt, "seed", ts, prefix);
        t.seed = ts;
      }
      c.tenants.push_back(std::move(t));
    }
    s.workload = std::move(c);
  } else if (kind == "autonomous") {
    AutonomousScenario a;
    a.seed = seed;
    read(j, "frame_rate", a.frame_rate, "");
    read(j, "frames", a.frames, "");
    read(j, "frame_app", a.frame_app, "");
    if (j.contains("events")) {
      for (std::size_t i = 0; i < j["events"].size(); ++i) {
        const json& je = j["events"][i];
        const std::string prefix = "events[" + std::to_string(i) + "].";
        EventSpec e;
        read(je, "id", e.event_id, prefix);
        read(je, "app", e.app_id, prefix);
        if (je.contains("gap")) {
          const SliceUsage gap = parse_unit(je["gap"], prefix + "gap");
          e.gap_min_frames = gap.array_slices;
          e.gap_max_frames = gap.glb_slices;
        }
        if (je.contains("seed")) {
          std::uint64_t es = 0;
          read(je, "seed", es, prefix);
          e.seed = es;
        }
        a.events.push_back(std::move(e));
      }
    }
    s.workload = std::move(a);
  } else {
    throw ConfigError("kind", "expected \"cloud\" or \"autonomous\"");
  }

  read(j, "scheduler", s.scheduler, "");
  read(j, "warmup_fraction", s.warmup_fraction, "");
  if (j.contains("horizon_s")) {
    double h = 0;
    read(j, "horizon_s", h, "");
    s.horizon_s = h;
  }
  if (j.contains("regions")) {
    const json& r = j["regions"];
    if (r.contains("fixed_unit") && !(r["fixed_unit"].is_string() && r["fixed_unit"] == "auto")) {
      s.fixed_unit = parse_unit(r["fixed_unit"], "regions.fixed_unit");
    }
    if (r.contains("variable_unit")) s.variable_unit = parse_unit(r["variable_unit"], "regions.variable_unit");
  }
  if (j.contains("dpr")) {
    const json& d = j["dpr"];
    if (d.contains("mechanism")) {
      s.mechanism.clear();
      for (const auto& [policy, mech] : d["mechanism"].items()) {
        try {
          s.mechanism[parse_policy_kind(policy)] = parse_dpr_mechanism(mech.get<std::string>());
        } catch (const json::exception& e) {
          throw ConfigError("dpr.mechanism." + policy, e.what());
        }
      }
    }
    json constants = d;
    constants.erase("mechanism");
    if (!constants.empty()) s.dpr = parse_dpr(constants, DprParams{}, "dpr.");
  }
  return s;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + (e.field().empty() ? "" : ":" + e.field()), e.what());
  }
}

std::string serialize_scenario(const ScenarioConfig& s) {
  ordered_json j{{"name", s.name}};
  if (const auto* c = std::get_if<CloudScenario>(&s.workload)) {
    j["kind"] = "cloud";
    j["seed"] = c->seed;
    j["duration_s"] = c->duration_s;
    ordered_json tenants = ordered_json::array();
    for (const auto& t : c->tenants) {
      ordered_json jt{{"id", t.tenant_id}, {"app", t.app_id}, {"rate_hz", t.rate_hz}};
      if (t.seed) jt["seed"] = *t.seed;
      tenants.push_back(std::move(jt));
    }
    j["tenants"] = std::move(tenants);
  } else {
    const auto& a = std::get<AutonomousScenario>(s.workload);
    j["kind"] = "autonomous";
    j["seed"] = a.seed;
    j["frame_rate"] = a.frame_rate;
    j["frames"] = a.frames;
    j["frame_app"] = a.frame_app;
    ordered_json events = ordered_json::array();
    for (const auto& e : a.events) {
      ordered_json je{{"id", e.event_id}, {"app", e.app_id}, {"gap", {e.gap_min_frames, e.gap_max_frames}}};
      if (e.seed) je["seed"] = *e.seed;
      events.push_back(std::move(je));
    }
    j["events"] = std::move(events);
  }
  j["scheduler"] = s.scheduler;
  j["warmup_fraction"] = s.warmup_fraction;
  if (s.horizon_s) j["horizon_s"] = *s.horizon_s;
  ordered_json regions{{"variable_unit", {s.variable_unit.array_slices, s.variable_unit.glb_slices}}};
  if (s.fixed_unit) {
    regions["fixed_unit"] = {s.fixed_unit->array_slices, s.fixed_unit->glb_slices};
  } else {
    regions["fixed_unit"] = "auto";
  }
  j["regions"] = std::move(regions);
  ordered_json dpr = s.dpr ? dpr_json(*s.dpr) : ordered_json::object();
  dpr.erase("mechanism");
  ordered_json mech = ordered_json::object();
  for (const auto& [policy, m] : s.mechanism) mech[std::string(to_string(policy))] = std::string(to_string(m));
  dpr["mechanism"] = std::move(mech);
  j["dpr"] = std::move(dpr);
  return j.dump(2) + "\n";
}

namespace {

ordered_json region_json(const Region& r) {
  return {{"id", to_underlying(r.id)},
          {"array", {r.array_run.start, r.array_run.length}},
          {"glb", {r.glb_run.start, r.glb_run.length}}};
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string serialize_trace(const Trace& t) {
  std::string out;
  ordered_json header{{"format", "slicesim-trace/1"},
                      {"platform", t.platform.name},
                      {"scenario", t.config.scenario_id},
                      {"seed", t.config.seed},
                      {"policy", std::string(to_string(t.config.policy.kind))},
                      {"unit", {t.config.policy.unit.array_slices, t.config.policy.unit.glb_slices}},
                      {"dpr", dpr_json(t.config.dpr)},
                      {"scheduler", t.scheduler},
                      {"horizon", t.config.horizon == kNoHorizon ? ordered_json(nullptr) : ordered_json(t.config.horizon)},
                      {"end_time", t.end_time}};
  out += header.dump() + "\n";
  for (const auto& e : t.events) {
    ordered_json j{{"t", e.time}, {"event", std::string(to_string(e.kind))}, {"request", to_underlying(e.request)}};
    if (e.region) j["region"] = to_underlying(*e.region);
    out += j.dump() + "\n";
  }
  for (const auto& r : t.requests) {
    ordered_json j{{"request", to_underlying(r.id)},
                   {"tenant", r.tenant_id},
                   {"app", r.app_id},
                   {"task", r.task_id},
                   {"frame", opt(r.frame)},
                   {"arrival", r.arrival},
                   {"ready", opt(r.ready)},
                   {"reconfig_start", opt(r.reconfig_start)},
                   {"exec_start", opt(r.exec_start)},
                   {"finish", opt(r.finish)},
                   {"variant", opt(r.variant)},
                   {"region", r.region ? region_json(*r.region) : ordered_json(nullptr)},
                   {"reconfig_cycles", r.reconfig_cycles},
                   {"exposed_preload", r.exposed_preload},
                   {"exec_cycles", r.exec_cycles},
                   {"work", r.work}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string summary_json(const Trace& t, const Summary& s) {
  ordered_json apps = ordered_json::array();
  for (const auto& a : s.apps) {
    apps.push_back({{"app", a.app_id},
                    {"completed", a.completed},
                    {"mean_ntat", a.mean_ntat},
                    {"throughput_work_per_cycle", a.throughput},
                    {"mean_tat_cycles", a.mean_tat_cycles}});
  }
  ordered_json j{{"format", "slicesim-summary/1"},
                 {"scenario", t.config.scenario_id},
                 {"seed", t.config.seed},
                 {"policy", std::string(to_string(t.config.policy.kind))},
                 {"dpr_mechanism", std::string(to_string(t.config.dpr.mechanism))},
                 {"scheduler", t.scheduler},
                 {"requests", s.requests},
                 {"completed", s.completed},
                 {"in_flight", s.in_flight},
                 {"queued", s.queued},
                 {"mean_array_utilization", s.mean_array_utilization},
                 {"mean_glb_utilization", s.mean_glb_utilization},
                 {"apps", std::move(apps)}};
  if (s.latency) {
    j["latency"] = {{"frames", s.latency->frames},
                    {"mean_latency_cycles", s.latency->mean_latency_cycles},
                    {"mean_latency_ms", s.latency->mean_latency_cycles / t.platform.clock_hz * 1e3},
                    {"reconfig_fraction", s.latency->reconfig_fraction},
                    {"wait_plus_exec_fraction", s.latency->wait_plus_exec_fraction},
                    {"deadline_misses", s.latency->deadline_misses}};
  }
  return j.dump(2) + "\n";
}

}  // namespace slicesim
