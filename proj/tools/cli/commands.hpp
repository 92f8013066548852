#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/allocator.hpp"
#include "slicesim/experiment.hpp"

namespace slicesim::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2 };

struct RunSpec {
  std::string platform = "amber-default";
  std::string catalog = "builtin";
  std::filesystem::path scenario;
  std::vector<PolicyKind> policies;
  std::optional<std::string> scheduler;
  std::vector<std::uint64_t> seeds;
  std::optional<double> horizon_s;
  std::filesystem::path out;
  bool export_stream = false;
  unsigned jobs = 1;

  /// Throws ConfigError when no policy or seed is given.
  void validate() const;
};

/// Fully resolved inputs of a RunSpec.
struct LoadedSpec {
  PlatformConfig platform;
  Catalog catalog;
  ScenarioConfig scenario;
};

LoadedSpec load_spec(const RunSpec& spec);

/// Runs every (policy, seed) cell. Writes per-cell traces and summaries,
/// metrics.csv, comparison.csv (normalized to the first policy) and
/// provenance.json under spec.out.
int cmd_run(const RunSpec& spec, std::ostream& log);

/// As cmd_run, but every seed replays the recorded stream instead of generating one.
int cmd_replay(const std::filesystem::path& stream_file, const RunSpec& spec, std::ostream& log);

int cmd_catalog_dump(const std::string& platform, const std::string& catalog, const std::string& format,
                     std::ostream& out);

enum class CalibrationTarget { fig5_rates, fig6_dpr };

CalibrationTarget parse_calibration_target(const std::string& name);

struct SweepRange {
  double lo = 0;
  double hi = 0;
  std::uint32_t steps = 0;

  /// Throws ConfigError for an empty or inverted range.
  std::vector<double> points() const;
};

/// Parses "lo:hi:steps".
SweepRange parse_sweep(const std::string& text);

/// Outcome of one sweep point.
struct CalibrationPoint {
  double knob = 0;
  bool in_target = false;
  bool utilization_in_band = false;
  double score = 0;  ///< lower is better
  // fig5
  std::vector<std::string> apps;
  std::vector<double> ntat_reduction;
  std::vector<double> throughput_ratio;
  double baseline_utilization = 0;
  // fig6
  double baseline_reconfig_fraction = 0;
  double fast_reconfig_fraction = 0;
  double latency_reduction = 0;
};

struct CalibrationResult {
  CalibrationTarget target;
  ScenarioConfig calibrated;
  CalibrationPoint best;
  std::vector<CalibrationPoint> sweep;
};

/// Evaluates one setting of the knob: fig5 scales all tenant rates by `knob`,
/// fig6 sets the bus cycles per word.
CalibrationPoint evaluate_point(CalibrationTarget target, const LoadedSpec& loaded, double knob,
                                const std::vector<std::uint64_t>& seeds);

/// Apply a knob value to a scenario.
ScenarioConfig apply_knob(CalibrationTarget target, const ScenarioConfig& scenario, const PlatformConfig& platform,
                          double knob);

CalibrationResult calibrate(CalibrationTarget target, const LoadedSpec& loaded, const SweepRange& sweep,
                            const std::vector<std::uint64_t>& seeds, std::ostream& log);

int cmd_calibrate(const std::string& target, const RunSpec& spec, const std::optional<std::string>& sweep,
                  std::ostream& log);

}  // namespace slicesim::cli
