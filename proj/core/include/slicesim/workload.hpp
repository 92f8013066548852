#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/catalog.hpp"
#include "slicesim/platform.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

/// One task instance submitted to the accelerator. Requests of one
/// application instance share `arrival` and are linked through `depends_on`.
struct StreamRequest {
  RequestId id{};
  std::string tenant_id;
  std::string app_id;
  std::string task_id;
  Cycles arrival = 0;
  std::vector<RequestId> depends_on;
  std::optional<std::uint64_t> frame;  ///< autonomous scenario only

  friend bool operator==(const StreamRequest&, const StreamRequest&) = default;
};

using RequestStream = std::vector<StreamRequest>;

struct TenantSpec {
  std::string tenant_id;
  std::string app_id;
  double rate_hz = 0.0;
  /// Overrides the sub-stream seed derived from the scenario seed.
  std::optional<std::uint64_t> seed;
};

struct CloudScenario {
  std::vector<TenantSpec> tenants;
  double duration_s = 1.0;
  std::uint64_t seed = 1;

  void validate(const Catalog& catalog) const;
};

struct EventSpec {
  std::string event_id;
  std::string app_id;
  std::uint32_t gap_min_frames = 3;
  std::uint32_t gap_max_frames = 7;
  std::optional<std::uint64_t> seed;
};

struct AutonomousScenario {
  double frame_rate = 30.0;
  std::string frame_app = "camera_pipeline";
  std::uint64_t frames = 300;
  std::vector<EventSpec> events;
  std::uint64_t seed = 1;

  void validate(const Catalog& catalog) const;
  Cycles frame_period(const PlatformConfig& platform) const;
};

/// Poisson arrivals per tenant; each arrival expands into the application's
/// runnable tasks with barrier-collapsed dependencies. Arrivals fall in
/// [0, duration).
RequestStream gen_cloud(const CloudScenario& scenario, const Catalog& catalog, const PlatformConfig& platform);

/// One frame-application instance per frame. Each event type recurs with
/// uniform integer gaps in [gap_min, gap_max] frames; an occurrence releases
/// the event's application chain behind the completion of that frame's
/// frame-application tasks.
RequestStream gen_autonomous(const AutonomousScenario& scenario, const Catalog& catalog,
                             const PlatformConfig& platform);

/// Checks ids are unique, arrivals sorted, dependencies point backwards and
/// every (app, task) is a runnable catalog task. Throws ValidationError.
void validate_stream(const RequestStream& stream, const Catalog& catalog);

/// Line-delimited JSON, one request per line after a format header.
std::string serialize_stream(const RequestStream& stream);
/// Throws ValidationError naming the 1-based line of the first bad record.
RequestStream parse_stream(std::string_view text);
void save_stream(const RequestStream& stream, const std::filesystem::path& path);
RequestStream load_stream(const std::filesystem::path& path);

}  // namespace slicesim
