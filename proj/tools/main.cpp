#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"drivesim: deterministic 2D driving-stack simulator and evaluation harness"};
  app.require_subcommand(1);

  const std::string data_dir = DRIVESIM_DATA_DIR;
  std::string presets_path = data_dir + "/presets.json";
  std::string agent_config_path;

  // run
  auto* run = app.add_subcommand("run", "Run one scenario closed-loop and score it");
  std::string scenario_path;
  std::string preset = "Mp";
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool dump_candidates = false;
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--agent-config", agent_config_path, "Agent config JSON");
  run->add_option("--preset", preset, "Degradation preset name");
  run->add_option("--presets", presets_path, "Preset bundle file");
  run->add_option("--seed", seed, "Noise stream seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--dump-candidates", dump_candidates, "Write the per-tick candidate cost dump");

  // ablation
  auto* ablation = app.add_subcommand("ablation", "Run a preset matrix over a scenario suite");
  std::string suite_dir = data_dir;
  std::string matrix_path;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int jobs = 2;
  ablation->add_option("--suite", suite_dir, "Directory of scenario JSONs")->required();
  ablation->add_option("--matrix", matrix_path, "JSON file with a presets array (default: all)");
  ablation->add_option("--presets", presets_path, "Preset bundle file");
  ablation->add_option("--agent-config", agent_config_path, "Agent config JSON");
  ablation->add_option("--seeds", seeds, "Seeds to repeat each run with");
  ablation->add_option("--jobs", jobs, "Concurrent runs");
  ablation->add_option("--out", out_dir, "Output directory");

  // train
  auto* train = app.add_subcommand("train", "Learn planner cost weights from demo tables");
  std::string demo_dir;
  std::string train_config;
  std::string weights_out = "weights.json";
  train->add_option("--demos", demo_dir, "Directory of demos-v1 CSV files")->required();
  train->add_option("--config", train_config, "Training config JSON");
  train->add_option("--out", weights_out, "Output weights JSON");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Write the longitudinal feed-forward table");
  std::string caltable_out = "caltable.csv";
  calibrate->add_option("--out", caltable_out, "Output CSV path");

  // plot-dump
  auto* plot = app.add_subcommand("plot-dump", "Flatten a tick log into plot-friendly CSVs");
  std::string log_path;
  plot->add_option("--log", log_path, "ticklog.jsonl from a run")->required();
  plot->add_option("--out", out_dir, "Output directory");

  // gen-demos
  auto* gen = app.add_subcommand("gen-demos", "Generate a synthetic demo suite");
  int count = 60;
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_option("--count", count, "Number of demos");
  gen->add_option("--seed", seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  // The only environment knob: output directory override.
  if (const char* env_out = std::getenv("DRIVESIM_OUT"); env_out != nullptr && *env_out != '\0') {
    out_dir = env_out;
  }

  try {
    if (run->parsed()) {
      return drivesim::cli::cmd_run(scenario_path, agent_config_path, preset, presets_path, seed,
                                    out_dir, dump_candidates);
    }
    if (ablation->parsed()) {
      return drivesim::cli::cmd_ablation(suite_dir, matrix_path, presets_path, agent_config_path,
                                         seeds, jobs, out_dir);
    }
    if (train->parsed()) {
      return drivesim::cli::cmd_train(demo_dir, train_config, weights_out);
    }
    if (calibrate->parsed()) {
      return drivesim::cli::cmd_calibrate(caltable_out);
    }
    if (plot->parsed()) {
      return drivesim::cli::cmd_plot_dump(log_path, out_dir);
    }
    if (gen->parsed()) {
      return drivesim::cli::cmd_gen_demos(out_dir, count, seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
