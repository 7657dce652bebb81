#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drivesim/agent.hpp"

namespace drivesim::cli {

struct PresetBundle {
  std::string name;
  DegradationConfig degradation;
  bool use_privileged_ids{true};
  double tracker_gate{-1.0};  // <= 0: keep the default
};

struct PresetFile {
  std::vector<PresetBundle> presets;  // file order preserved

  const PresetBundle* find(const std::string& name) const;
  std::vector<std::string> names() const;
};

PresetFile load_presets(const std::string& path);
AgentConfig load_agent_config(const std::string& path);
void apply_preset(const PresetBundle& preset, AgentConfig& agent, DegradationConfig& degradation);

// Writes report.json / report.csv / report.md / ticklog.jsonl (and the
// candidate dump when enabled) under <out>/<scenario>-<preset>-seed<seed>/.
std::string write_run_outputs(const RunResult& run, const std::string& out_dir,
                              const std::string& scenario_name, const std::string& preset_name,
                              std::uint64_t seed, bool dump_candidates);

int cmd_run(const std::string& scenario_path, const std::string& agent_config_path,
            const std::string& preset_name, const std::string& presets_path, std::uint64_t seed,
            const std::string& out_dir, bool dump_candidates);

int cmd_ablation(const std::string& suite_dir, const std::string& matrix_path,
                 const std::string& presets_path, const std::string& agent_config_path,
                 const std::vector<std::uint64_t>& seeds, int jobs, const std::string& out_dir);

int cmd_train(const std::string& demo_dir, const std::string& config_path,
              const std::string& out_path);

int cmd_calibrate(const std::string& out_path);

int cmd_plot_dump(const std::string& log_path, const std::string& out_dir);

int cmd_gen_demos(const std::string& out_dir, int count, std::uint64_t seed);

}  // namespace drivesim::cli
