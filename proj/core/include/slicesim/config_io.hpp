#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "slicesim/engine.hpp"
#include "slicesim/metrics.hpp"
#include "slicesim/platform.hpp"

namespace slicesim {

struct ScenarioConfig;

/// JSON platform description; absent keys keep their amber-default values.
PlatformConfig parse_platform(std::string_view json_text);
/// "amber-default" (or empty) selects the built-in profile, anything else is a path.
PlatformConfig load_platform_source(std::string_view source);
std::string serialize_platform(const PlatformConfig& platform);

ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioConfig& scenario);

/// One JSON object per line: a header with the run configuration, then one
/// line per logged event, then one line per request record.
std::string serialize_trace(const Trace& trace);

/// Structured run summary (per-app metrics, latency breakdown, utilization).
std::string summary_json(const Trace& trace, const Summary& summary);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace slicesim
