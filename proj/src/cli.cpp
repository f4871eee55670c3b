// Copyright 2026 The Pandemic ABM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pandemic_abm/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pandemic_abm/disease.hpp"
#include "pandemic_abm/engine.hpp"
#include "pandemic_abm/outputs.hpp"

namespace pabm {
namespace {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PANDEMIC_ABM_LOG");
    const std::string v = env ? env : "info";
    if (v == "error") return LogLevel::kError;
    if (v == "debug") return LogLevel::kDebug;
    return LogLevel::kInfo;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) std::cerr << "[info] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) std::cerr << "[debug] " << msg << '\n';
}

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> sets;
  int runs = 0;
  int jobs = 1;
  bool plot = false;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("config,--config", o.config_path, "Scenario YAML file");
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--set", o.sets, "Override a config key: --set key=value (repeatable)");
  cmd->add_option("--runs", o.runs, "Number of runs (overrides num_runs)");
  cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  cmd->add_flag("--plot", o.plot, "Also write SVG charts");
  cmd->add_option("--seed", o.seed, "RNG seed (overrides seed)");
}

Overrides overrides_of(const CommonOptions& o) {
  Overrides out;
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects key=value, got '" + s + "'");
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.runs > 0) out.emplace_back("num_runs", std::to_string(o.runs));
  if (o.seed >= 0) out.emplace_back("seed", std::to_string(o.seed));
  return out;
}

ScenarioConfig load(const CommonOptions& o, const Overrides& extra = {}) {
  if (o.config_path.empty()) throw ConfigError("no config file given (positional or --config)");
  Overrides all = overrides_of(o);
  all.insert(all.end(), extra.begin(), extra.end());
  return load_config(o.config_path, all);
}

Summary run_scenario(const ScenarioConfig& config, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  const Summary summary = aggregate(run_ensemble(config, jobs));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream msg;
  msg << config.results_file_postfix << ": " << config.num_runs << " run(s) x "
      << config.num_steps << " steps, N=" << config.num_agents << " in " << secs << " s";
  log_info(msg.str());
  return summary;
}

int cmd_run(const CommonOptions& o, bool events) {
  const ScenarioConfig config = load(o);
  const Summary summary = run_scenario(config, o.jobs);
  const OutputPaths paths = write_outputs(summary, config, o.out_dir, o.plot);
  log_info("wrote " + paths.timeseries.string() + " and " + paths.summary.string());
  if (events) {
    class Recorder : public RunObserver {
     public:
      bool record_events() const override { return true; }
      void on_run_end(const World& w) override { log = w.events; }
      EventLog log;
    } recorder;
    run(config, 0, &recorder);
    const auto path =
        std::filesystem::path(o.out_dir) / ("events_" + config.results_file_postfix + ".csv");
    auto out = open_output(path);
    recorder.log.write_csv(out);
    log_info("wrote " + path.string());
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_compare(const CommonOptions& o, const std::string& scenarios) {
  const ScenarioConfig base = load(o);
  std::vector<ComparisonRow> rows;
  for (const std::string& name : split_list(scenarios)) {
    const ScenarioConfig config = apply_preset(base, name);
    const Summary summary = run_scenario(config, o.jobs);
    write_outputs(summary, config, o.out_dir, o.plot);
    rows.push_back({name, summary});
  }
  if (rows.empty()) throw ConfigError("--scenarios: no scenario given");
  const auto path = std::filesystem::path(o.out_dir) / "comparison.csv";
  auto out = open_output(path);
  write_comparison_csv(out, rows);
  log_info("wrote " + path.string());
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::string& values,
              const std::string& range, const std::string& metrics_arg) {
  std::vector<std::string> points = split_list(values);
  if (!range.empty()) {
    const auto parts = split_list(range);
    if (parts.size() != 3) throw ConfigError("--range expects lo,hi,steps");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int steps = std::stoi(parts[2]);
    if (steps < 1) throw ConfigError("--range: steps must be >= 1");
    for (int k = 0; k < steps; ++k) {
      const double v = steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1);
      points.push_back(format_number(v));
    }
  }
  if (points.empty()) throw ConfigError("sweep needs --values or --range");
  std::vector<std::string> metrics = split_list(metrics_arg);
  for (const std::string& m : metrics) (void)sweep_metric(Summary{}, m);

  std::vector<SweepPoint> results;
  for (const std::string& value : points) {
    ScenarioConfig config = load(o, {{param, value}});
    log_debug(param + "=" + value + " config " + config_hash(config));
    results.push_back({value, run_scenario(config, o.jobs)});
  }
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / "sweep.csv";
  auto out = open_output(path);
  write_sweep_csv(out, results, metrics);
  log_info("wrote " + path.string());
  return 0;
}

int cmd_calibrate(const CommonOptions& o, double target, int index_cases,
                  const std::string& overlay_path) {
  ScenarioConfig config = load(o);
  disable_interventions(config);
  if (target < 0.0) target = config.disease.target_R;
  const CalibrationResult r =
      calibrate_beta(config, target, RngStream(config.seed).split(0xca1b), index_cases);
  // Independent check: fresh population, fresh courses, Bernoulli draws.
  const RngStream check = RngStream(config.seed).split(0xc4ec);
  const Population pop = sample_population(config, check.split(0));
  const auto exposures = sample_index_exposures(config, pop, index_cases, check.split(1));
  const double remeasured = realized_secondary_infections(exposures, r.beta, check.split(2));

  std::ostringstream msg;
  msg.precision(10);
  msg << "beta=" << r.beta << " R=" << r.achieved_R << " re-measured R=" << remeasured
      << " (max attainable " << r.max_R << ", " << r.iterations << " bisections)";
  std::cout << msg.str() << '\n';

  std::filesystem::path path = overlay_path;
  if (path.empty()) path = std::filesystem::path(o.out_dir) / "beta_overlay.yaml";
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto out = open_output(path);
  out.precision(17);
  out << "# target R " << target << ", re-measured " << remeasured << "\n";
  out << "beta: " << r.beta << "\n";
  log_info("wrote " + path.string());
  return 0;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> kNames = {"NI", "SQ", "VACC", "CT", "ALL"};
  return kNames;
}

void disable_interventions(ScenarioConfig& c) {
  c.logic = LogicToggles{};
  sync_derived_fields(c);
}

ScenarioConfig apply_preset(const ScenarioConfig& base, const std::string& name) {
  ScenarioConfig c = base;
  disable_interventions(c);
  LogicToggles& l = c.logic;
  const bool testing = name == "SQ" || name == "CT" || name == "ALL";
  const bool tracing = name == "CT" || name == "ALL";
  const bool vaccination = name == "VACC" || name == "ALL";
  if (!testing && !vaccination && name != "NI") {
    throw ConfigError("unknown scenario '" + name + "' (use NI, SQ, VACC, CT, ALL)");
  }
  l.use_rtpcr_test_logic = testing;
  l.use_quarantine_logic = testing;
  l.use_den_logic = tracing;
  l.use_mct_logic = tracing;
  l.use_hybrid_logic = tracing;
  l.use_vaccination_logic = vaccination;
  c.results_file_postfix = name;
  sync_derived_fields(c);
  validate_config(c);
  return c;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Agent-based epidemic simulator with testing, quarantine, vaccination and "
               "contact tracing"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool events = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario ensemble");
  add_common(run_cmd, run_opts);
  run_cmd->add_flag("--events", events, "Write the event log of run 0");

  CommonOptions cmp_opts;
  std::string scenarios = "NI,SQ,VACC,CT";
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare scenario presets");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--scenarios", scenarios, "Comma-separated presets: NI,SQ,VACC,CT,ALL")
      ->capture_default_str();

  CommonOptions sweep_opts;
  std::string param, values, range, metrics = "peak_hospitalizations,cumulative_infections,total_cost";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweep over one parameter");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--param", param, "Dot path of the swept key")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values");
  sweep_cmd->add_option("--range", range, "lo,hi,steps");
  sweep_cmd->add_option("--metrics", metrics, "Comma-separated metrics")->capture_default_str();

  CommonOptions cal_opts;
  double target = -1.0;
  int index_cases = 20000;
  std::string overlay;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Calibrate beta to a target R");
  add_common(cal_cmd, cal_opts);
  cal_cmd->add_option("--target", target, "Target R (default: the config's R)");
  cal_cmd->add_option("--index-cases", index_cases, "Index cases sampled")->capture_default_str();
  cal_cmd->add_option("--overlay", overlay, "Overlay file (default <out>/beta_overlay.yaml)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) return cmd_run(run_opts, events);
    if (*cmp_cmd) return cmd_compare(cmp_opts, scenarios);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, param, values, range, metrics);
    if (*cal_cmd) return cmd_calibrate(cal_opts, target, index_cases, overlay);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace pabm
