#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "drivesim/irl.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace drivesim::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

}  // namespace

const PresetBundle* PresetFile::find(const std::string& name) const {
  for (const PresetBundle& p : presets) {
    if (p.name == name) {
      return &p;
    }
  }
  return nullptr;
}

std::vector<std::string> PresetFile::names() const {
  std::vector<std::string> out;
  out.reserve(presets.size());
  for (const PresetBundle& p : presets) {
    out.push_back(p.name);
  }
  return out;
}

PresetFile load_presets(const std::string& path) {
  const auto doc = nlohmann::ordered_json::parse(read_file(path));
  if (doc.value("version", "") != "presets-v1") {
    throw std::runtime_error(path + ": expected presets-v1");
  }
  PresetFile out;
  for (const auto& [name, jp] : doc.at("presets").items()) {
    PresetBundle p;
    p.name = name;
    const auto& jd = jp.at("degradation");
    p.degradation.detection_range = jd.value("detection_range", 0.0);
    p.degradation.position_noise_sigma = jd.value("position_noise_sigma", 0.0);
    p.degradation.yaw_noise_sigma = jd.value("yaw_noise_sigma", 0.0);
    p.degradation.dropout_prob = jd.value("dropout_prob", 0.0);
    p.degradation.provide_ids = jd.value("provide_ids", true);
    p.degradation.signal_misread_prob = jd.value("signal_misread_prob", 0.0);
    p.degradation.ego_pos_noise_sigma = jd.value("ego_pos_noise_sigma", 0.0);
    if (jp.contains("agent")) {
      p.use_privileged_ids = jp["agent"].value("use_privileged_ids", true);
      p.tracker_gate = jp["agent"].value("tracker_gate", -1.0);
    }
    out.presets.push_back(std::move(p));
  }
  return out;
}

AgentConfig load_agent_config(const std::string& path) {
  AgentConfig cfg;
  if (path.empty()) {
    return cfg;
  }
  const auto doc = nlohmann::json::parse(read_file(path));
  if (doc.contains("weights")) {
    const auto& jw = doc["weights"];
    cfg.weights.swift = jw.value("swift", cfg.weights.swift);
    cfg.weights.ljerk = jw.value("ljerk", cfg.weights.ljerk);
    cfg.weights.latjerk = jw.value("latjerk", cfg.weights.latjerk);
    cfg.weights.ref = jw.value("ref", cfg.weights.ref);
    cfg.weights.safety = jw.value("safety", cfg.weights.safety);
  }
  cfg.weights.gamma = doc.value("gamma", cfg.weights.gamma);
  cfg.use_privileged_ids = doc.value("use_privileged_ids", cfg.use_privileged_ids);
  cfg.dump_candidates = doc.value("dump_candidates", cfg.dump_candidates);
  if (doc.contains("tracker_gate")) {
    cfg.tracker.gate = doc["tracker_gate"].get<double>();
  }
  return cfg;
}

void apply_preset(const PresetBundle& preset, AgentConfig& agent, DegradationConfig& degradation) {
  degradation = preset.degradation;
  agent.use_privileged_ids = preset.use_privileged_ids;
  if (preset.tracker_gate > 0.0) {
    agent.tracker.gate = preset.tracker_gate;
  }
}

std::string write_run_outputs(const RunResult& run, const std::string& out_dir,
                              const std::string& scenario_name, const std::string& preset_name,
                              std::uint64_t seed, bool dump_candidates) {
  const fs::path dir =
      fs::path(out_dir) / (scenario_name + "-" + preset_name + "-seed" + std::to_string(seed));
  fs::create_directories(dir);

  write_file(dir / "report.json", score_report_json(run.report, scenario_name, preset_name, seed));

  const ScoreSummary single = aggregate({run.report});
  std::ostringstream csv;
  csv << score_csv_header("exp") << "\n" << score_csv_row(preset_name, single) << "\n";
  write_file(dir / "report.csv", csv.str());
  write_file(dir / "report.md", score_markdown_table({{preset_name, single}}));

  std::ostringstream log;
  for (const std::string& line : run.ticklog) {
    log << line << "\n";
  }
  write_file(dir / "ticklog.jsonl", log.str());

  if (dump_candidates) {
    std::ostringstream cand;
    cand << candidate_csv_header() << "\n";
    for (const std::string& row : run.candidate_rows) {
      cand << row << "\n";
    }
    write_file(dir / "candidates.csv", cand.str());
  }
  return dir.string();
}

int cmd_run(const std::string& scenario_path, const std::string& agent_config_path,
            const std::string& preset_name, const std::string& presets_path, std::uint64_t seed,
            const std::string& out_dir, bool dump_candidates) {
  const PresetFile presets = load_presets(presets_path);
  const PresetBundle* preset = presets.find(preset_name);
  if (preset == nullptr) {
    std::cerr << "unknown preset '" << preset_name << "'. valid presets:";
    for (const std::string& n : presets.names()) {
      std::cerr << " " << n;
    }
    std::cerr << "\n";
    return 2;
  }

  Scenario scenario = Scenario::load(scenario_path);
  AgentConfig agent = load_agent_config(agent_config_path);
  agent.dump_candidates = agent.dump_candidates || dump_candidates;
  DegradationConfig degradation;
  apply_preset(*preset, agent, degradation);
  degradation.seed = seed;

  const RunResult run = run_route(scenario, agent, degradation);
  const std::string dir =
      write_run_outputs(run, out_dir, scenario.name, preset_name, seed, agent.dump_candidates);

  std::cout << "scenario=" << scenario.name << " preset=" << preset_name << " seed=" << seed
            << " DS=" << run.report.driving_score << " RC=" << run.report.route_completion
            << " IS=" << run.report.infraction_penalty << " completed=" << (run.completed ? 1 : 0)
            << "\n"
            << "outputs: " << dir << "\n";
  return 0;
}

int cmd_ablation(const std::string& suite_dir, const std::string& matrix_path,
                 const std::string& presets_path, const std::string& agent_config_path,
                 const std::vector<std::uint64_t>& seeds, int jobs, const std::string& out_dir) {
  const PresetFile presets = load_presets(presets_path);
  std::vector<std::string> matrix;
  if (!matrix_path.empty()) {
    const auto doc = nlohmann::json::parse(read_file(matrix_path));
    matrix = doc.at("presets").get<std::vector<std::string>>();
  } else {
    matrix = presets.names();
  }
  for (const std::string& name : matrix) {
    if (presets.find(name) == nullptr) {
      std::cerr << "unknown preset in matrix: " << name << "\n";
      return 2;
    }
  }

  std::vector<std::string> scenario_paths;
  for (const auto& entry : fs::directory_iterator(suite_dir)) {
    if (entry.path().extension() != ".json") {
      continue;
    }
    // The data directory also holds presets and configs; take scenarios only.
    try {
      const auto doc = nlohmann::json::parse(read_file(entry.path().string()));
      if (doc.value("version", "") == "scenario-v1") {
        scenario_paths.push_back(entry.path().string());
      }
    } catch (const std::exception&) {
    }
  }
  std::sort(scenario_paths.begin(), scenario_paths.end());
  if (scenario_paths.empty()) {
    std::cerr << "no scenarios in " << suite_dir << "\n";
    return 1;
  }

  struct Task {
    std::string scenario_path;
    std::string preset;
    std::uint64_t seed{0};
  };
  std::vector<Task> tasks;
  for (const std::string& preset : matrix) {
    for (const std::string& path : scenario_paths) {
      for (std::uint64_t seed : seeds) {
        tasks.push_back({path, preset, seed});
      }
    }
  }

  std::vector<ScoreReport> reports(tasks.size());
  std::vector<char> failed(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) {
          return;
        }
        try {
          const Task& task = tasks[i];
          Scenario scenario = Scenario::load(task.scenario_path);
          AgentConfig agent = load_agent_config(agent_config_path);
          DegradationConfig degradation;
          apply_preset(*load_presets(presets_path).find(task.preset), agent, degradation);
          degradation.seed = task.seed;
          reports[i] = run_route(scenario, agent, degradation).report;
        } catch (const std::exception& e) {
          std::cerr << "run failed: " << e.what() << "\n";
          failed[i] = 1;
        }
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }

  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << score_csv_header("exp") << "\n";
  std::vector<std::pair<std::string, ScoreSummary>> rows;
  const std::size_t per_preset = scenario_paths.size() * seeds.size();
  for (std::size_t pi = 0; pi < matrix.size(); ++pi) {
    std::vector<ScoreReport> group;
    bool any_failed = false;
    for (std::size_t k = 0; k < per_preset; ++k) {
      const std::size_t i = pi * per_preset + k;
      if (failed[i]) {
        any_failed = true;
      } else {
        group.push_back(reports[i]);
      }
    }
    if (group.empty()) {
      csv << matrix[pi] << ",failed\n";
      continue;
    }
    ScoreSummary summary = aggregate(group);
    rows.emplace_back(matrix[pi] + (any_failed ? "*" : ""), summary);
    csv << score_csv_row(rows.back().first, summary) << "\n";
  }
  write_file(fs::path(out_dir) / "ablation.csv", csv.str());
  write_file(fs::path(out_dir) / "ablation.md", score_markdown_table(rows));
  std::cout << score_markdown_table(rows);
  return 0;
}

int cmd_train(const std::string& demo_dir, const std::string& config_path,
              const std::string& out_path) {
  TrainConfig cfg;
  std::string lanemap_path = std::string(DRIVESIM_DATA_DIR) + "/lanemaps/straight.json";
  if (!config_path.empty()) {
    const auto doc = nlohmann::json::parse(read_file(config_path));
    cfg.lambda = doc.value("lambda", cfg.lambda);
    cfg.eta0 = doc.value("eta0", cfg.eta0);
    cfg.eta_exponent = doc.value("eta_exponent", cfg.eta_exponent);
    cfg.epochs = doc.value("epochs", cfg.epochs);
    cfg.loss_scale = doc.value("loss_scale", cfg.loss_scale);
    cfg.holdout_every = doc.value("holdout_every", cfg.holdout_every);
    if (doc.contains("gamma_grid")) {
      cfg.gamma_grid = doc["gamma_grid"].get<std::vector<double>>();
    }
    lanemap_path = doc.value("lanemap", lanemap_path);
  }

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(demo_dir)) {
    if (entry.path().extension() == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no demo files in " << demo_dir << "\n";
    return 1;
  }

  const LaneMap map = LaneMap::load(lanemap_path);
  const IngestResult ingest = ingest_demos(files, map, cfg);
  std::cout << "demos: " << ingest.demos.size() << " (skipped " << ingest.skipped_short
            << " short tracks)\n";
  if (ingest.demos.empty()) {
    std::cerr << "no usable demos\n";
    return 1;
  }

  const TrainedWeights trained = mmp_train(ingest.demos, cfg);
  const ImitationEval eval = evaluate_imitation(trained.weights, ingest.demos, cfg);
  std::cout << "gamma=" << trained.weights.gamma << " holdout_loss=" << trained.holdout_loss
            << " match_rate=" << eval.match_rate << "\n";

  TrainedWeights out = trained;
  out.holdout_match_rate = eval.match_rate;
  fs::create_directories(fs::path(out_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(out_path).parent_path());
  write_file(out_path, weights_to_json(out));
  std::cout << "weights written to " << out_path << "\n";
  return 0;
}

int cmd_calibrate(const std::string& out_path) {
  const Scenario sc = Scenario::load(std::string(DRIVESIM_DATA_DIR) + "/straight_road.json");
  SimWorld world(sc);
  const CalibrationTable table =
      calibrate([&](double u, double v) { return world.steady_accel(u, v); });
  write_file(out_path, table.to_csv());
  std::cout << "calibration table written to " << out_path << "\n";
  return 0;
}

int cmd_plot_dump(const std::string& log_path, const std::string& out_dir) {
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open " << log_path << "\n";
    return 1;
  }
  fs::create_directories(out_dir);
  std::ofstream ego(fs::path(out_dir) / "ego_trace.csv");
  std::ofstream tracks(fs::path(out_dir) / "tracks.csv");
  std::ofstream decisions(fs::path(out_dir) / "decisions.csv");
  std::ofstream events(fs::path(out_dir) / "events.csv");
  ego << "tick,t,x,y,yaw,v,a,throttle,brake,steer,candidate\n";
  tracks << "tick,t,id,category,x,y,yaw,v\n";
  decisions << "tick,t,kind,trigger,required_gap,observed_gap\n";
  events << "tick,t,kind\n";

  std::string line;
  int line_no = 0;
  char buf[512];
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      std::cerr << log_path << ":" << line_no << ": bad record: " << e.what() << "\n";
      return 1;
    }
    const int tick = rec.value("tick", 0);
    const double t = rec.value("t", 0.0);
    const auto& e = rec["ego"];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n", tick, t,
                  e.value("x", 0.0), e.value("y", 0.0), e.value("yaw", 0.0), e.value("v", 0.0),
                  e.value("a", 0.0), rec["cmd"].value("throttle", 0.0),
                  rec["cmd"].value("brake", 0.0), rec["cmd"].value("steer", 0.0),
                  rec["candidate"].value("index", -1));
    ego << buf;
    for (const auto& tr : rec.value("tracks", nlohmann::json::array())) {
      std::snprintf(buf, sizeof(buf), "%d,%.9g,%d,%s,%.9g,%.9g,%.9g,%.9g\n", tick, t,
                    tr.value("id", -1), tr.value("category", "?").c_str(), tr.value("x", 0.0),
                    tr.value("y", 0.0), tr.value("yaw", 0.0), tr.value("v", 0.0));
      tracks << buf;
    }
    const auto& d = rec["decision"];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%s,%d,%.9g,%.9g\n", tick, t,
                  d.value("kind", "?").c_str(), d.value("trigger", -1),
                  d.value("required_gap", 0.0), d.value("observed_gap", -1.0));
    decisions << buf;
    for (const auto& ev : rec.value("events", nlohmann::json::array())) {
      std::snprintf(buf, sizeof(buf), "%d,%.9g,%s\n", tick, t, ev.value("kind", "?").c_str());
      events << buf;
    }
  }
  std::cout << "plot csvs written to " << out_dir << "\n";
  return 0;
}

int cmd_gen_demos(const std::string& out_dir, int count, std::uint64_t seed) {
  const LaneMap map = LaneMap::load(std::string(DRIVESIM_DATA_DIR) + "/lanemaps/straight.json");
  TrainConfig cfg;
  CostWeights generating;
  generating.swift = 0.02;
  generating.ljerk = 0.004;
  generating.latjerk = 0.004;
  generating.ref = 0.03;
  generating.safety = 1.0;
  generating.gamma = 1.0;
  const auto demos = generate_synthetic_demos(count, generating, map, 1, cfg, seed);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "demos.csv", write_demo_csv(synthetic_demo_rows(demos)));
  nlohmann::json meta;
  meta["count"] = static_cast<int>(demos.size());
  meta["seed"] = seed;
  meta["generating_weights"] = {{"swift", generating.swift},
                                {"ljerk", generating.ljerk},
                                {"latjerk", generating.latjerk},
                                {"ref", generating.ref},
                                {"safety", generating.safety},
                                {"gamma", generating.gamma}};
  write_file(fs::path(out_dir) / "generator.json", meta.dump(2));
  // Training hyper-parameters that converge on this suite.
  nlohmann::json tc;
  tc["lambda"] = 1e-4;
  tc["eta0"] = 0.003;
  tc["eta_exponent"] = 0.5;
  tc["epochs"] = 100;
  tc["loss_scale"] = 0.05;
  tc["holdout_every"] = 4;
  tc["gamma_grid"] = {0.25, 0.5, 1.0, 2.0};
  tc["lanemap"] = std::string(DRIVESIM_DATA_DIR) + "/lanemaps/straight.json";
  write_file(fs::path(out_dir) / "train_config.json", tc.dump(2));
  std::cout << demos.size() << " demos written to " << out_dir << "\n";
  return 0;
}

}  // namespace drivesim::cli
