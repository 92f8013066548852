#include <CLI11.hpp>
#include <iostream>

#include "cli/commands.hpp"
#include "slicesim/error.hpp"

using namespace slicesim;

namespace {

void add_spec_options(CLI::App* cmd, cli::RunSpec& spec, std::vector<std::string>& policies) {
  cmd->add_option("--platform", spec.platform, "Platform file or 'amber-default'");
  cmd->add_option("--catalog", spec.catalog, "Catalog file or 'builtin'");
  cmd->add_option("--scenario", spec.scenario, "Scenario file")->required();
  cmd->add_option("--policy", policies, "Region policy (repeatable): baseline, fixed, variable, flexible");
  cmd->add_option("--seed", spec.seeds, "Workload seed (repeatable)");
  cmd->add_option("--horizon", spec.horizon_s, "Simulation horizon in seconds");
  cmd->add_option("--out", spec.out, "Output directory")->required();
  cmd->add_option("--jobs", spec.jobs, "Cells run concurrently");
  cmd->add_option_function<std::string>("--scheduler", [&spec](const std::string& s) { spec.scheduler = s; },
                                        "greedy, greedy-single or fifo-single");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced-CGRA multi-task scheduling simulator"};
  app.require_subcommand(1);

  cli::RunSpec spec;
  std::vector<std::string> policies;
  bool export_stream = false;

  auto* run = app.add_subcommand("run", "Simulate a scenario under each policy and seed");
  add_spec_options(run, spec, policies);
  run->add_flag("--export-stream", export_stream, "Also write the generated request streams");

  std::string stream_file;
  auto* replay = app.add_subcommand("replay", "Simulate a recorded request stream");
  add_spec_options(replay, spec, policies);
  replay->add_option("--stream", stream_file, "Stream file written by run --export-stream")->required();

  std::string target;
  std::optional<std::string> sweep;
  auto* calibrate = app.add_subcommand("calibrate", "Fit workload or DPR knobs to published figures");
  add_spec_options(calibrate, spec, policies);
  calibrate->add_option("--target", target, "fig5-rates or fig6-dpr")->required();
  calibrate->add_option_function<std::string>("--sweep", [&](const std::string& s) { sweep = s; }, "lo:hi:steps");

  std::string dump_platform = "amber-default";
  std::string dump_catalog = "builtin";
  std::string format = "csv";
  auto* dump = app.add_subcommand("catalog-dump", "Print the task variant catalog");
  dump->add_option("--platform", dump_platform, "Platform file or 'amber-default'");
  dump->add_option("--catalog", dump_catalog, "Catalog file or 'builtin'");
  dump->add_option("--format", format, "csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& p : policies) spec.policies.push_back(parse_policy_kind(p));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  }
  spec.export_stream = export_stream;

  if (*run) return cli::cmd_run(spec, std::cerr);
  if (*replay) return cli::cmd_replay(stream_file, spec, std::cerr);
  if (*calibrate) return cli::cmd_calibrate(target, spec, sweep, std::cerr);
  if (*dump) return cli::cmd_catalog_dump(dump_platform, dump_catalog, format, std::cout);
  return cli::kFailure;
}
