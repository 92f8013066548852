#include "slicesim/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "slicesim/error.hpp"

namespace slicesim {

using nlohmann::json;

void TaskVariant::validate() const {
  const std::string where = task_id + "/" + version;
  if (version.empty()) throw ValidationError(task_id + ": variant without a version label");
  if (throughput == 0) throw ValidationError(where + ": throughput must be positive");
  if (work == 0) throw ValidationError(where + ": work must be positive");
  if (bitstream_words == 0) throw ValidationError(where + ": bitstream_words must be positive");
  if (usage.array_slices == 0 || usage.glb_slices == 0) {
    throw ValidationError(where + ": a runnable variant needs at least one array-slice and one GLB-slice");
  }
}

Cycles exec_cycles(const TaskVariant& variant) {
  variant.validate();
  return ceil_div(variant.work, variant.throughput);
}

const TaskNode* Application::find(std::string_view task_id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(),
                         [&](const TaskNode& t) { return t.task_id == task_id; });
  return it == tasks.end() ? nullptr : &*it;
}

namespace {

void validate_application(const Application& app) {
  if (app.app_id.empty()) throw ValidationError("application without an id");
  std::set<std::string_view> ids;
  for (const auto& node : app.tasks) {
    const std::string where = app.app_id + "/" + node.task_id;
    if (node.task_id.empty()) throw ValidationError(app.app_id + ": task without an id");
    if (!ids.insert(node.task_id).second) throw ValidationError(where + ": duplicate task id");
    if (node.barrier && !node.variants.empty()) {
      throw ValidationError(where + ": a barrier task cannot carry variants");
    }
    if (!node.barrier && node.variants.empty()) {
      throw ValidationError(where + ": task has no variants");
    }
    std::set<std::string_view> versions;
    for (std::size_t i = 0; i < node.variants.size(); ++i) {
      const auto& v = node.variants[i];
      v.validate();
      if (v.task_id != node.task_id) throw ValidationError(where + ": variant names task " + v.task_id);
      if (!versions.insert(v.version).second) {
        throw ValidationError(where + ": duplicate version " + v.version);
      }
      for (std::size_t j = 0; j < i; ++j) {
        const auto& w = node.variants[j];
        if (w.throughput == v.throughput && w.usage == v.usage) {
          throw ValidationError(where + ": versions " + w.version + " and " + v.version +
                                " have identical throughput and usage");
        }
      }
    }
  }
  for (const auto& node : app.tasks) {
    for (const auto& dep : node.depends_on) {
      if (!ids.contains(dep)) {
        throw ValidationError(app.app_id + "/" + node.task_id + ": unknown dependency " + dep);
      }
    }
  }

  // Cycle detection with path reporting.
  enum class Mark { none, active, done };
  std::map<std::string_view, Mark> mark;
  std::vector<std::string_view> stack;
  std::function<void(const TaskNode&)> visit = [&](const TaskNode& node) {
    mark[node.task_id] = Mark::active;
    stack.push_back(node.task_id);
    for (const auto& dep : node.depends_on) {
      const Mark m = mark[dep];
      if (m == Mark::active) {
        std::string path;
        auto from = std::find(stack.begin(), stack.end(), std::string_view(dep));
        for (auto it = from; it != stack.end(); ++it) path += std::string(*it) + " -> ";
        path += dep;
        throw ValidationError(app.app_id + ": dependency cycle " + path);
      }
      if (m == Mark::none) visit(*app.find(dep));
    }
    stack.pop_back();
    mark[node.task_id] = Mark::done;
  };
  for (const auto& node : app.tasks) {
    if (mark[node.task_id] == Mark::none) visit(node);
  }
}

TaskNode runnable(const std::string& id, std::vector<std::string> deps, std::uint64_t work,
                  std::uint64_t words,
                  std::initializer_list<std::tuple<const char*, std::uint32_t, std::uint32_t, std::uint32_t>> rows) {
  TaskNode node{id, std::move(deps), {}, false};
  for (const auto& [version, throughput, array, glb] : rows) {
    node.variants.push_back(TaskVariant{id, version, throughput, {array, glb}, work, words});
  }
  return node;
}

TaskNode barrier(const std::string& id, std::vector<std::string> deps) {
  return TaskNode{id, std::move(deps), {}, true};
}

}  // namespace

Catalog::Catalog(std::vector<Application> apps) : apps_(std::move(apps)) {
  std::set<std::string_view> ids;
  for (const auto& app : apps_) {
    validate_application(app);
    if (!ids.insert(app.app_id).second) throw ValidationError("duplicate application " + app.app_id);
  }
}

Catalog Catalog::builtin(const PlatformConfig& platform) {
  // Work per invocation. ResNet-18 and MobileNet-v1 MAC counts are for a
  // 224x224 input (see scripts/work_amounts.py); image kernels process one
  // 1920x1080 frame.
  constexpr std::uint64_t kResNetConv2 = 462'422'016;
  constexpr std::uint64_t kResNetConv3 = 411'041'792;
  constexpr std::uint64_t kResNetConv4 = 411'041'792;
  constexpr std::uint64_t kResNetConv5 = 411'041'792;
  constexpr std::uint64_t kMobileNet2 = 82'489'344;
  constexpr std::uint64_t kMobileNet3 = 79'779'840;
  constexpr std::uint64_t kMobileNet4 = 287'558'656;
  constexpr std::uint64_t kFramePixels = 1920ull * 1080ull;

  const std::uint64_t w = platform.bitstream_words_per_slice();

  Application resnet{"resnet18",
                     {barrier("conv1_x", {}),
                      runnable("conv2_x", {"conv1_x"}, kResNetConv2, w, {{"a", 64, 2, 7}, {"b", 256, 6, 7}}),
                      runnable("conv3_x", {"conv2_x"}, kResNetConv3, w, {{"a", 64, 2, 4}, {"b", 256, 6, 4}}),
                      runnable("conv4_x", {"conv3_x"}, kResNetConv4, w, {{"a", 64, 2, 6}, {"b", 256, 6, 6}}),
                      runnable("conv5_x", {"conv4_x"}, kResNetConv5, w, {{"a", 64, 2, 20}, {"b", 128, 6, 20}}),
                      barrier("fc", {"conv5_x"})}};
  Application mobilenet{
      "mobilenet",
      {barrier("conv1_x", {}),
       runnable("conv_dw_pw_2_x", {"conv1_x"}, kMobileNet2, w, {{"a", 52, 2, 4}, {"b", 208, 5, 4}}),
       runnable("conv_dw_pw_3_x", {"conv_dw_pw_2_x"}, kMobileNet3, w, {{"a", 52, 2, 4}, {"b", 104, 3, 4}}),
       runnable("conv_dw_pw_4_x", {"conv_dw_pw_3_x"}, kMobileNet4, w, {{"a", 52, 2, 4}, {"b", 104, 3, 4}}),
       barrier("head", {"conv_dw_pw_4_x"})}};
  Application camera{"camera_pipeline",
                     {runnable("camera_pipeline", {}, kFramePixels, w, {{"a", 3, 4, 4}, {"b", 12, 6, 14}})}};
  Application harris{"harris",
                     {runnable("harris", {}, kFramePixels, w, {{"a", 1, 2, 4}, {"b", 2, 4, 7}, {"c", 4, 7, 14}})}};
  return Catalog({std::move(resnet), std::move(mobilenet), std::move(camera), std::move(harris)});
}

const Application* Catalog::find_app(std::string_view app_id) const {
  auto it = std::find_if(apps_.begin(), apps_.end(),
                         [&](const Application& a) { return a.app_id == app_id; });
  return it == apps_.end() ? nullptr : &*it;
}

const Application& Catalog::app(std::string_view app_id) const {
  if (const auto* a = find_app(app_id)) return *a;
  throw ValidationError("unknown application " + std::string(app_id));
}

const TaskNode& Catalog::task(std::string_view app_id, std::string_view task_id) const {
  if (const auto* t = app(app_id).find(task_id)) return *t;
  throw ValidationError("unknown task " + std::string(app_id) + "/" + std::string(task_id));
}

std::vector<const TaskNode*> Catalog::runnable_tasks(std::string_view app_id) const {
  const Application& a = app(app_id);
  std::vector<const TaskNode*> order;
  std::set<std::string_view> placed;
  // Kahn-style passes over declaration order keep the result stable.
  while (placed.size() < a.tasks.size()) {
    for (const auto& node : a.tasks) {
      if (placed.contains(node.task_id)) continue;
      const bool ready = std::all_of(node.depends_on.begin(), node.depends_on.end(),
                                     [&](const std::string& d) { return placed.contains(d); });
      if (!ready) continue;
      placed.insert(node.task_id);
      if (!node.barrier) order.push_back(&node);
    }
  }
  return order;
}

std::vector<std::string> Catalog::effective_dependencies(std::string_view app_id,
                                                         std::string_view task_id) const {
  const Application& a = app(app_id);
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::vector<std::string> frontier = task(app_id, task_id).depends_on;
  while (!frontier.empty()) {
    std::string id = std::move(frontier.back());
    frontier.pop_back();
    if (!seen.insert(id).second) continue;
    const TaskNode* node = a.find(id);
    if (node->barrier) {
      frontier.insert(frontier.end(), node->depends_on.begin(), node->depends_on.end());
    } else {
      out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Catalog::variant_count() const {
  std::size_t n = 0;
  for (const auto& a : apps_) {
    for (const auto& t : a.tasks) n += t.variants.size();
  }
  return n;
}

std::vector<const TaskVariant*> eligible_variants(const TaskNode& node, const SliceUsage& free) {
  std::vector<const TaskVariant*> out;
  for (const auto& v : node.variants) {
    if (v.usage.fits_within(free)) out.push_back(&v);
  }
  std::sort(out.begin(), out.end(), [](const TaskVariant* x, const TaskVariant* y) {
    if (x->throughput != y->throughput) return x->throughput > y->throughput;
    if (x->usage.array_slices != y->usage.array_slices) {
      return x->usage.array_slices < y->usage.array_slices;
    }
    if (x->usage.glb_slices != y->usage.glb_slices) return x->usage.glb_slices < y->usage.glb_slices;
    return x->version < y->version;
  });
  return out;
}

namespace {

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key, e.what());
  }
}

}  // namespace

Catalog parse_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("applications") || !doc["applications"].is_array()) {
    throw ConfigError("applications", "expected an array of applications");
  }
  std::vector<Application> apps;
  std::size_t ai = 0;
  for (const auto& ja : doc["applications"]) {
    const std::string awhere = "applications[" + std::to_string(ai++) + "]";
    Application app{get_field<std::string>(ja, "id", awhere), {}};
    if (!ja.contains("tasks") || !ja["tasks"].is_array()) throw ConfigError(awhere + ".tasks", "expected an array");
    std::size_t ti = 0;
    for (const auto& jt : ja["tasks"]) {
      const std::string twhere = awhere + ".tasks[" + std::to_string(ti++) + "]";
      TaskNode node;
      node.task_id = get_field<std::string>(jt, "id", twhere);
      node.barrier = jt.value("barrier", false);
      if (jt.contains("depends_on")) node.depends_on = get_field<std::vector<std::string>>(jt, "depends_on", twhere);
      if (jt.contains("variants")) {
        std::size_t vi = 0;
        for (const auto& row : jt["variants"]) {
          const std::string vwhere = twhere + ".variants[" + std::to_string(vi++) + "]";
          if (!row.is_array() || row.size() != 6) {
            throw ConfigError(vwhere, "expected [version, throughput, array_slices, glb_slices, work, bitstream_words]");
          }
          try {
            node.variants.push_back(TaskVariant{node.task_id, row[0].get<std::string>(),
                                                row[1].get<std::uint32_t>(),
                                                {row[2].get<std::uint32_t>(), row[3].get<std::uint32_t>()},
                                                row[4].get<std::uint64_t>(), row[5].get<std::uint64_t>()});
          } catch (const json::exception& e) {
            throw ConfigError(vwhere, e.what());
          }
        }
      }
      app.tasks.push_back(std::move(node));
    }
    apps.push_back(std::move(app));
  }
  return Catalog(std::move(apps));
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("catalog", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

Catalog load_catalog_source(std::string_view source, const PlatformConfig& platform) {
  if (source.empty() || source == "builtin") return Catalog::builtin(platform);
  return load_catalog(std::filesystem::path(source));
}

std::string serialize_catalog(const Catalog& catalog) {
  json apps = json::array();
  for (const auto& app : catalog.applications()) {
    json tasks = json::array();
    for (const auto& node : app.tasks) {
      json jt{{"id", node.task_id}};
      if (!node.depends_on.empty()) jt["depends_on"] = node.depends_on;
      if (node.barrier) jt["barrier"] = true;
      if (!node.variants.empty()) {
        json rows = json::array();
        for (const auto& v : node.variants) {
          rows.push_back(json::array({v.version, v.throughput, v.usage.array_slices, v.usage.glb_slices,
                                      v.work, v.bitstream_words}));
        }
        jt["variants"] = std::move(rows);
      }
      tasks.push_back(std::move(jt));
    }
    apps.push_back(json{{"id", app.app_id}, {"tasks", std::move(tasks)}});
  }
  json doc{{"format", "slicesim-catalog/1"}, {"applications", std::move(apps)}};
  return doc.dump(2) + "\n";
}

std::string catalog_csv(const Catalog& catalog) {
  std::ostringstream os;
  os << "app,task,version,throughput,array_slices,glb_slices,work,bitstream_words\n";
  for (const auto& app : catalog.applications()) {
    for (const auto& node : app.tasks) {
      for (const auto& v : node.variants) {
        os << app.app_id << ',' << node.task_id << ',' << v.version << ',' << v.throughput << ','
           << v.usage.array_slices << ',' << v.usage.glb_slices << ',' << v.work << ','
           << v.bitstream_words << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace slicesim
