#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "slicesim/platform.hpp"
#include "slicesim/types.hpp"

namespace slicesim {

/// One pre-compiled version of a task. All variants of a task share `work`
/// and differ only in footprint and throughput.
struct TaskVariant {
  std::string task_id;
  std::string version;
  std::uint32_t throughput = 0;  ///< work units per cycle
  SliceUsage usage;
  std::uint64_t work = 0;             ///< MACs or pixels per invocation
  std::uint64_t bitstream_words = 0;  ///< configuration words per occupied array-slice

  void validate() const;

  friend bool operator==(const TaskVariant&, const TaskVariant&) = default;
};

/// ceil(work / throughput); always at least one cycle for a valid variant.
Cycles exec_cycles(const TaskVariant& variant);

/// A task inside an application DAG. A barrier task carries no variants and
/// completes the instant its dependencies do.
struct TaskNode {
  std::string task_id;
  std::vector<std::string> depends_on;
  std::vector<TaskVariant> variants;
  bool barrier = false;

  friend bool operator==(const TaskNode&, const TaskNode&) = default;
};

struct Application {
  std::string app_id;
  std::vector<TaskNode> tasks;

  const TaskNode* find(std::string_view task_id) const;

  friend bool operator==(const Application&, const Application&) = default;
};

class Catalog {
 public:
  Catalog() = default;
  /// Validates ids, dependency references, acyclicity and variant invariants.
  explicit Catalog(std::vector<Application> apps);

  /// Table of ResNet-18, MobileNet, camera pipeline and Harris variants.
  /// Bitstream sizes follow `platform`'s geometry.
  static Catalog builtin(const PlatformConfig& platform = amber_default());

  const std::vector<Application>& applications() const { return apps_; }
  const Application& app(std::string_view app_id) const;
  const Application* find_app(std::string_view app_id) const;
  const TaskNode& task(std::string_view app_id, std::string_view task_id) const;

  /// Non-barrier tasks of `app_id` in a topological order (stable w.r.t.
  /// declaration order).
  std::vector<const TaskNode*> runnable_tasks(std::string_view app_id) const;

  /// Dependencies of `task_id` with barrier tasks collapsed: the nearest
  /// non-barrier ancestors reached through barrier chains.
  std::vector<std::string> effective_dependencies(std::string_view app_id,
                                                  std::string_view task_id) const;

  std::size_t variant_count() const;

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  std::vector<Application> apps_;
};

/// Variants of `node` whose footprint fits within `free`, by descending
/// throughput; ties go to fewer array-slices, then fewer GLB-slices, then
/// version label.
std::vector<const TaskVariant*> eligible_variants(const TaskNode& node, const SliceUsage& free);

Catalog parse_catalog(std::string_view json_text);
Catalog load_catalog(const std::filesystem::path& path);
/// Loads `source`, where the literal "builtin" selects Catalog::builtin.
Catalog load_catalog_source(std::string_view source, const PlatformConfig& platform);
std::string serialize_catalog(const Catalog& catalog);
/// One row per variant: app,task,version,throughput,array_slices,glb_slices,work,bitstream_words.
std::string catalog_csv(const Catalog& catalog);

}  // namespace slicesim
