#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/catalog.hpp"
#include "slicesim/engine.hpp"
#include "slicesim/platform.hpp"
#include "slicesim/scheduler.hpp"
#include "slicesim/workload.hpp"

namespace slicesim::testing {

inline std::string source_path(const std::string& rel) { return std::string(SLICESIM_SOURCE_DIR) + "/" + rel; }

/// A stream of independent single-task requests.
struct StreamBuilder {
  RequestStream stream;

  StreamBuilder& add(std::string app, std::string task, Cycles arrival, std::vector<std::uint64_t> deps = {},
                     std::string tenant = "t0") {
    StreamRequest r;
    r.id = RequestId{stream.size()};
    r.tenant_id = std::move(tenant);
    r.app_id = std::move(app);
    r.task_id = std::move(task);
    r.arrival = arrival;
    for (auto d : deps) r.depends_on.push_back(RequestId{d});
    stream.push_back(std::move(r));
    return *this;
  }
};

inline RunConfig run_config_for(PolicyKind kind, DprMechanism mech = DprMechanism::fast_parallel,
                                SliceUsage unit = {1, 4}) {
  RunConfig c;
  c.policy = RegionPolicy{kind, unit};
  c.dpr.mechanism = mech;
  c.scenario_id = "test";
  return c;
}

inline Trace simulate(const RequestStream& stream, const RunConfig& config, const Catalog& catalog = Catalog::builtin(),
                      const std::string& scheduler = "greedy") {
  auto s = make_scheduler(scheduler);
  return run(amber_default(), catalog, stream, *s, config);
}

}  // namespace slicesim::testing
