#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "slicesim/config_io.hpp"
#include "slicesim/error.hpp"
#include "slicesim/metrics.hpp"

namespace slicesim::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Published cloud-scenario ranges and the accepted band around them.
constexpr double kPaperNtatReductionLo = 0.23;
constexpr double kPaperNtatReductionHi = 0.28;
constexpr double kPaperThroughputLo = 1.05;
constexpr double kPaperThroughputHi = 1.24;
constexpr double kBandNtatReductionLo = 0.15;
constexpr double kBandNtatReductionHi = 0.35;
constexpr double kBandThroughputLo = 1.02;
constexpr double kBandThroughputHi = 1.35;
constexpr double kUtilizationLo = 0.5;
constexpr double kUtilizationHi = 0.7;

// Frame-latency reconfiguration shares.
constexpr double kPaperBaselineReconfig = 0.144;
constexpr double kBandBaselineReconfigLo = 0.13;
constexpr double kBandBaselineReconfigHi = 0.16;
constexpr double kFastReconfigCeiling = 0.05;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

double distance_outside(double v, double lo, double hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

std::string cell_name(PolicyKind policy, std::uint64_t seed) {
  return std::string(to_string(policy)) + "-s" + std::to_string(seed);
}

struct Cells {
  std::vector<CellResult> results;  // policy-major, then seed
};

Cells run_cells(const LoadedSpec& loaded, const RunSpec& spec, const std::vector<RequestStream>* streams) {
  struct Job {
    PolicyKind policy;
    std::uint64_t seed;
    std::size_t seed_index;
  };
  std::vector<Job> jobs;
  for (PolicyKind p : spec.policies) {
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) jobs.push_back({p, spec.seeds[i], i});
  }
  auto work = [&](const Job& j) {
    const RequestStream* stream = streams ? &(*streams)[j.seed_index] : nullptr;
    return run_cell(loaded.platform, loaded.catalog, loaded.scenario, j.policy, j.seed, stream);
  };
  Cells cells;
  cells.results.reserve(jobs.size());
  const unsigned width = std::max(1u, spec.jobs);
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<CellResult>> batch;
    for (std::size_t i = start; i < std::min(jobs.size(), start + width); ++i) {
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, work, jobs[i]));
    }
    for (auto& f : batch) cells.results.push_back(f.get());
  }
  return cells;
}

std::string provenance(const RunSpec& spec, const LoadedSpec& loaded, const std::string& stream_file) {
  ordered_json policies = ordered_json::array();
  for (PolicyKind p : spec.policies) policies.push_back(std::string(to_string(p)));
  ordered_json j{{"format", "slicesim-provenance/1"},
                 {"platform", ordered_json::parse(serialize_platform(loaded.platform))},
                 {"catalog_source", spec.catalog},
                 {"catalog", ordered_json::parse(serialize_catalog(loaded.catalog))},
                 {"scenario", ordered_json::parse(serialize_scenario(loaded.scenario))},
                 {"scenario_id", loaded.scenario.scenario_id()},
                 {"policies", std::move(policies)},
                 {"seeds", spec.seeds}};
  if (!stream_file.empty()) j["replayed_stream"] = stream_file;
  return j.dump(2) + "\n";
}

void write_outputs(const RunSpec& spec, const LoadedSpec& loaded, const Cells& cells,
                   const std::vector<RequestStream>* exported, const std::string& stream_file, std::ostream& log) {
  fs::create_directories(spec.out / "cells");
  std::ostringstream metrics;
  metrics << "policy,dpr_mechanism,seed,app,completed,mean_ntat,throughput_work_per_cycle,mean_tat_cycles\n";
  for (const auto& c : cells.results) {
    const std::string name = cell_name(c.policy, c.seed);
    write_text_file(spec.out / "cells" / (name + ".trace.jsonl"), serialize_trace(c.trace));
    write_text_file(spec.out / "cells" / (name + ".summary.json"), summary_json(c.trace, c.summary));
    for (const auto& a : c.summary.apps) {
      metrics << to_string(c.policy) << ',' << to_string(c.trace.config.dpr.mechanism) << ',' << c.seed << ','
              << a.app_id << ',' << a.completed << ',' << fmt(a.mean_ntat) << ',' << fmt(a.throughput) << ','
              << fmt(a.mean_tat_cycles) << '\n';
    }
  }
  write_text_file(spec.out / "metrics.csv", metrics.str());

  // Seed-averaged comparison against the first policy.
  std::map<PolicyKind, std::vector<Summary>> by_policy;
  for (const auto& c : cells.results) by_policy[c.policy].push_back(c.summary);
  const Summary base = mean_summary(by_policy[spec.policies.front()]);
  std::ostringstream cmp;
  cmp << "policy,dpr_mechanism,app,ntat_ratio,ntat_reduction,throughput_ratio,latency_ratio,reconfig_fraction\n";
  for (PolicyKind p : spec.policies) {
    const Summary mean = mean_summary(by_policy[p]);
    const DprParams dpr = dpr_for(p, loaded.scenario, loaded.platform);
    const TraceComparison row = compare_summaries(base, mean, std::string(to_string(p)));
    const std::string lat = row.latency_ratio ? fmt(*row.latency_ratio) : "";
    const std::string rf = mean.latency ? fmt(mean.latency->reconfig_fraction) : "";
    for (const auto& a : row.apps) {
      cmp << to_string(p) << ',' << to_string(dpr.mechanism) << ',' << a.app_id << ',' << fmt(a.ntat_ratio) << ','
          << fmt(a.ntat_reduction()) << ',' << fmt(a.throughput_ratio) << ',' << lat << ',' << rf << '\n';
    }
    log << std::left << std::setw(10) << to_string(p);
    for (const auto& a : row.apps) {
      log << "  " << a.app_id << " ntat x" << std::setprecision(3) << a.ntat_ratio << " tput x" << a.throughput_ratio;
    }
    if (row.latency_ratio) log << "  latency x" << *row.latency_ratio << " reconfig " << mean.latency->reconfig_fraction;
    log << '\n';
  }
  write_text_file(spec.out / "comparison.csv", cmp.str());
  write_text_file(spec.out / "provenance.json", provenance(spec, loaded, stream_file));
  if (exported) {
    fs::create_directories(spec.out / "streams");
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      save_stream((*exported)[i], spec.out / "streams" / ("s" + std::to_string(spec.seeds[i]) + ".stream.jsonl"));
    }
  }
}

template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

void RunSpec::validate() const {
  if (policies.empty()) throw ConfigError("--policy", "at least one policy is required");
  if (seeds.empty()) throw ConfigError("--seed", "at least one seed is required");
  if (scenario.empty()) throw ConfigError("--scenario", "a scenario file is required");
  if (horizon_s && !(*horizon_s > 0)) throw ConfigError("--horizon", "must be positive");
}

LoadedSpec load_spec(const RunSpec& spec) {
  spec.validate();
  PlatformConfig platform = load_platform_source(spec.platform);
  Catalog catalog = load_catalog_source(spec.catalog, platform);
  ScenarioConfig scenario = load_scenario(spec.scenario);
  if (spec.scheduler) scenario.scheduler = *spec.scheduler;
  if (spec.horizon_s) scenario.horizon_s = spec.horizon_s;
  scenario.validate(catalog);
  for (PolicyKind p : spec.policies) policy_for(p, scenario, platform, catalog);
  return {std::move(platform), std::move(catalog), std::move(scenario)};
}

int cmd_run(const RunSpec& spec, std::ostream& log) {
  return guarded(log, [&] {
    const LoadedSpec loaded = load_spec(spec);
    std::vector<RequestStream> streams;
    for (std::uint64_t seed : spec.seeds) streams.push_back(generate(loaded.scenario, loaded.catalog, loaded.platform, seed));
    const Cells cells = run_cells(loaded, spec, &streams);
    write_outputs(spec, loaded, cells, spec.export_stream ? &streams : nullptr, "", log);
    return kOk;
  });
}

int cmd_replay(const fs::path& stream_file, const RunSpec& spec, std::ostream& log) {
  return guarded(log, [&] {
    const LoadedSpec loaded = load_spec(spec);
    RequestStream stream = load_stream(stream_file);
    validate_stream(stream, loaded.catalog);
    const std::vector<RequestStream> streams(spec.seeds.size(), stream);
    const Cells cells = run_cells(loaded, spec, &streams);
    write_outputs(spec, loaded, cells, nullptr, stream_file.string(), log);
    return kOk;
  });
}

int cmd_catalog_dump(const std::string& platform, const std::string& catalog, const std::string& format,
                     std::ostream& out) {
  return guarded(out, [&] {
    const PlatformConfig p = load_platform_source(platform);
    const Catalog c = load_catalog_source(catalog, p);
    if (format == "csv") {
      out << catalog_csv(c);
    } else if (format == "json") {
      out << serialize_catalog(c);
    } else {
      throw ConfigError("--format", "expected csv or json");
    }
    return kOk;
  });
}

CalibrationTarget parse_calibration_target(const std::string& name) {
  if (name == "fig5-rates") return CalibrationTarget::fig5_rates;
  if (name == "fig6-dpr") return CalibrationTarget::fig6_dpr;
  throw ConfigError("--target", "expected fig5-rates or fig6-dpr");
}

std::vector<double> SweepRange::points() const {
  if (steps == 0 || !(hi >= lo) || !(lo > 0)) throw ConfigError("--sweep", "empty or invalid sweep range");
  std::vector<double> out;
  if (steps == 1) return {lo};
  for (std::uint32_t i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  return out;
}

SweepRange parse_sweep(const std::string& text) {
  SweepRange r;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.steps) || c1 != ':' || c2 != ':') {
    throw ConfigError("--sweep", "expected lo:hi:steps");
  }
  r.points();
  return r;
}

ScenarioConfig apply_knob(CalibrationTarget target, const ScenarioConfig& scenario, const PlatformConfig& platform,
                          double knob) {
  ScenarioConfig s = scenario;
  if (target == CalibrationTarget::fig5_rates) {
    auto* cloud = std::get_if<CloudScenario>(&s.workload);
    if (!cloud) throw ConfigError("kind", "fig5-rates needs a cloud scenario");
    for (auto& t : cloud->tenants) t.rate_hz *= knob;
  } else {
    if (s.is_cloud()) throw ConfigError("kind", "fig6-dpr needs an autonomous scenario");
    DprParams d = s.dpr.value_or(platform.dpr);
    d.bus_cycles_per_word = knob;
    s.dpr = d;
  }
  return s;
}

CalibrationPoint evaluate_point(CalibrationTarget target, const LoadedSpec& loaded, double knob,
                                const std::vector<std::uint64_t>& seeds) {
  const ScenarioConfig s = apply_knob(target, loaded.scenario, loaded.platform, knob);
  std::vector<Summary> base;
  std::vector<Summary> flex;
  for (std::uint64_t seed : seeds) {
    base.push_back(run_cell(loaded.platform, loaded.catalog, s, PolicyKind::baseline, seed).summary);
    flex.push_back(run_cell(loaded.platform, loaded.catalog, s, PolicyKind::flexible, seed).summary);
  }
  const Summary b = mean_summary(base);
  const Summary f = mean_summary(flex);
  CalibrationPoint pt;
  pt.knob = knob;
  pt.baseline_utilization = b.mean_array_utilization;
  if (target == CalibrationTarget::fig5_rates) {
    const TraceComparison row = compare_summaries(b, f, "flexible");
    pt.utilization_in_band = distance_outside(pt.baseline_utilization, kUtilizationLo, kUtilizationHi) == 0;
    pt.in_target = !row.apps.empty();
    for (const auto& a : row.apps) {
      pt.apps.push_back(a.app_id);
      pt.ntat_reduction.push_back(a.ntat_reduction());
      pt.throughput_ratio.push_back(a.throughput_ratio);
      pt.score += distance_outside(a.ntat_reduction(), kPaperNtatReductionLo, kPaperNtatReductionHi) +
                  distance_outside(a.throughput_ratio, kPaperThroughputLo, kPaperThroughputHi);
      pt.in_target = pt.in_target &&
                     distance_outside(a.ntat_reduction(), kBandNtatReductionLo, kBandNtatReductionHi) == 0 &&
                     distance_outside(a.throughput_ratio, kBandThroughputLo, kBandThroughputHi) == 0;
    }
  } else {
    pt.baseline_reconfig_fraction = b.latency ? b.latency->reconfig_fraction : 0;
    pt.fast_reconfig_fraction = f.latency ? f.latency->reconfig_fraction : 0;
    pt.latency_reduction =
        b.latency && b.latency->mean_latency_cycles > 0 ? 1.0 - f.latency->mean_latency_cycles / b.latency->mean_latency_cycles : 0;
    pt.score = std::abs(pt.baseline_reconfig_fraction - kPaperBaselineReconfig) +
               distance_outside(pt.fast_reconfig_fraction, 0, kFastReconfigCeiling);
    pt.in_target = pt.baseline_reconfig_fraction >= kBandBaselineReconfigLo &&
                   pt.baseline_reconfig_fraction <= kBandBaselineReconfigHi &&
                   pt.fast_reconfig_fraction < kFastReconfigCeiling;
  }
  return pt;
}

CalibrationResult calibrate(CalibrationTarget target, const LoadedSpec& loaded, const SweepRange& sweep,
                            const std::vector<std::uint64_t>& seeds, std::ostream& log) {
  CalibrationResult result{target, loaded.scenario, {}, {}};
  auto better = [](const CalibrationPoint& a, const CalibrationPoint& b) {
    if (a.in_target != b.in_target) return a.in_target;
    if (a.utilization_in_band != b.utilization_in_band) return a.utilization_in_band;
    return a.score < b.score;
  };
  auto report = [&](const CalibrationPoint& pt) {
    log << "knob " << fmt(pt.knob) << (pt.in_target ? "  [in band]" : "") << (pt.utilization_in_band ? "  [util]" : "") << "  score " << fmt(pt.score);
    if (target == CalibrationTarget::fig5_rates) {
      for (std::size_t i = 0; i < pt.apps.size(); ++i) {
        log << "  " << pt.apps[i] << " -" << std::setprecision(3) << 100 * pt.ntat_reduction[i] << "% x"
            << pt.throughput_ratio[i];
      }
      log << "  base util " << pt.baseline_utilization;
    } else {
      log << "  base " << pt.baseline_reconfig_fraction << " fast " << pt.fast_reconfig_fraction << " latency -"
          << 100 * pt.latency_reduction << "%";
    }
    log << '\n';
  };
  for (double knob : sweep.points()) {
    result.sweep.push_back(evaluate_point(target, loaded, knob, seeds));
    report(result.sweep.back());
  }
  auto best = std::min_element(result.sweep.begin(), result.sweep.end(), better);
  CalibrationPoint chosen = *best;

  // The baseline reconfiguration share is monotone in bus cost: refine by bisection.
  if (target == CalibrationTarget::fig6_dpr && result.sweep.size() > 1) {
    double lo = sweep.lo;
    double hi = sweep.hi;
    for (const auto& pt : result.sweep) {
      if (pt.baseline_reconfig_fraction < kPaperBaselineReconfig) lo = std::max(lo, pt.knob);
      if (pt.baseline_reconfig_fraction >= kPaperBaselineReconfig) hi = std::min(hi, pt.knob);
    }
    for (int i = 0; i < 20 && hi > lo; ++i) {
      const double mid = 0.5 * (lo + hi);
      CalibrationPoint pt = evaluate_point(target, loaded, mid, seeds);
      if (better(pt, chosen)) chosen = pt;
      (pt.baseline_reconfig_fraction < kPaperBaselineReconfig ? lo : hi) = mid;
    }
    report(chosen);
  }
  result.best = chosen;
  result.calibrated = apply_knob(target, loaded.scenario, loaded.platform, chosen.knob);
  return result;
}

int cmd_calibrate(const std::string& target_name, const RunSpec& spec, const std::optional<std::string>& sweep_text,
                  std::ostream& log) {
  return guarded(log, [&] {
    const CalibrationTarget target = parse_calibration_target(target_name);
    RunSpec s = spec;
    if (s.policies.empty()) s.policies = {PolicyKind::baseline, PolicyKind::flexible};
    if (s.seeds.empty()) s.seeds = {1, 2, 3, 4, 5};
    const LoadedSpec loaded = load_spec(s);
    const SweepRange sweep = sweep_text ? parse_sweep(*sweep_text)
                                        : (target == CalibrationTarget::fig5_rates ? SweepRange{0.5, 3.0, 11}
                                                                                   : SweepRange{0.5, 12.0, 12});
    const CalibrationResult result = calibrate(target, loaded, sweep, s.seeds, log);

    fs::create_directories(s.out);
    write_text_file(s.out / "calibrated_scenario.json", serialize_scenario(result.calibrated));
    ordered_json sweep_json = ordered_json::array();
    auto point_json = [&](const CalibrationPoint& pt) {
      ordered_json j{{"knob", pt.knob}, {"in_target", pt.in_target}, {"score", pt.score},
                     {"baseline_utilization", pt.baseline_utilization}};
      if (target == CalibrationTarget::fig5_rates) j["utilization_in_band"] = pt.utilization_in_band;
      if (target == CalibrationTarget::fig5_rates) {
        ordered_json apps = ordered_json::array();
        for (std::size_t i = 0; i < pt.apps.size(); ++i) {
          apps.push_back({{"app", pt.apps[i]},
                          {"ntat_reduction", pt.ntat_reduction[i]},
                          {"throughput_ratio", pt.throughput_ratio[i]}});
        }
        j["apps"] = std::move(apps);
      } else {
        j["baseline_reconfig_fraction"] = pt.baseline_reconfig_fraction;
        j["fast_reconfig_fraction"] = pt.fast_reconfig_fraction;
        j["latency_reduction"] = pt.latency_reduction;
      }
      return j;
    };
    for (const auto& pt : result.sweep) sweep_json.push_back(point_json(pt));
    ordered_json report{{"format", "slicesim-calibration/1"},
                        {"target", target_name},
                        {"knob", target == CalibrationTarget::fig5_rates ? "tenant rate scale" : "bus_cycles_per_word"},
                        {"seeds", s.seeds},
                        {"achieved", point_json(result.best)},
                        {"sweep", std::move(sweep_json)}};
    write_text_file(s.out / "calibration_report.json", report.dump(2) + "\n");
    if (!result.best.in_target) log << "warning: no sweep point reached the target band; best effort written\n";
    return kOk;
  });
}

}  // namespace slicesim::cli
