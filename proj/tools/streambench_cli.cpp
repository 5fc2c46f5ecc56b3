// streambench command line: offline evaluation, pipeline simulation,
// K-step / window sweeps, and numeric kernel self-checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streambench/coco_io.hpp"
#include "streambench/detectors.hpp"
#include "streambench/report.hpp"
#include "streambench/selfcheck.hpp"
#include "streambench/simulator.hpp"

namespace sb = streambench;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelfCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInvariantError = 3;

struct CommonOptions {
  std::string annotations;
  std::string scenario_spec;
  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv", "json"};
  std::string policy = "real_time";
  int k = 1;
  int warmup = 0;
  std::uint64_t seed = 0;
  double frame_period = 0.0;  // 0 => keep the scenario's period
  int jobs = 1;
};

struct DetectorOptions {
  std::vector<std::string> detectors = {"delayed"};
  double track_iou = 0.3;
  int miss_budget = 3;
  double noise_jitter = 0.0;
  double noise_score_std = 0.0;
  double noise_drop = 0.0;
  double noise_spurious = 0.0;
};

struct LatencyOptions {
  std::string kind = "constant";
  double mean = 0.02;
  double std_dev = 0.0;
  double floor = 1e-4;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--annotations", opt.annotations,
                  "COCO-style stream annotations (JSON)");
  cmd->add_option("--scenario-spec", opt.scenario_spec,
                  "synthetic scenario spec (JSON)");
  cmd->add_option("--out", opt.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--format", opt.formats,
                  "report formats: csv, json, svg (repeatable)")
      ->capture_default_str();
  cmd->add_option("--policy", opt.policy, "real_time or non_real_time")
      ->capture_default_str();
  cmd->add_option("--k", opt.k, "step horizon K (evaluates k = 1..K)")
      ->capture_default_str();
  cmd->add_option("--warmup", opt.warmup,
                  "leading frames excluded while forecasters fill their "
                  "support window")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "root random seed")
      ->capture_default_str();
  cmd->add_option("--frame-period", opt.frame_period,
                  "override the scenario frame period (seconds)");
  cmd->add_option("--jobs", opt.jobs, "parallel sequences / sweep cells")
      ->capture_default_str();
}

void add_detector(CLI::App* cmd, DetectorOptions& opt, bool multiple) {
  auto* det = cmd->add_option("--detector", opt.detectors,
                              "perfect, delayed or const-velocity"
                              " (repeatable for ksweep)");
  det->capture_default_str();
  if (!multiple) det->expected(1);
  cmd->add_option("--track-iou", opt.track_iou,
                  "const-velocity association threshold")
      ->capture_default_str();
  cmd->add_option("--miss-budget", opt.miss_budget,
                  "frames before a stale track is dropped")
      ->capture_default_str();
  cmd->add_option("--noise-jitter", opt.noise_jitter,
                  "box corner jitter std (pixels)");
  cmd->add_option("--noise-score-std", opt.noise_score_std,
                  "detection score perturbation std");
  cmd->add_option("--noise-drop", opt.noise_drop,
                  "probability a forecast box is dropped");
  cmd->add_option("--noise-spurious", opt.noise_spurious,
                  "probability of a spurious box per forecast");
}

void add_latency(CLI::App* cmd, LatencyOptions& opt) {
  cmd->add_option("--latency-kind", opt.kind,
                  "constant, gaussian_clamped or trace")
      ->capture_default_str();
  cmd->add_option("--latency-mean", opt.mean, "mean latency (seconds)")
      ->capture_default_str();
  cmd->add_option("--latency-std", opt.std_dev,
                  "latency std for gaussian_clamped (seconds)")
      ->capture_default_str();
  cmd->add_option("--latency-floor", opt.floor, "latency lower clamp")
      ->capture_default_str();
}

std::unique_ptr<sb::DetectorModel> build_detector(const std::string& name,
                                                  const DetectorOptions& opt) {
  std::unique_ptr<sb::DetectorModel> detector;
  if (name == "const-velocity" || name == "cv") {
    sb::ConstantVelocityForecaster::Params params;
    params.association_iou = opt.track_iou;
    params.miss_budget = opt.miss_budget;
    detector = std::make_unique<sb::ConstantVelocityForecaster>(params);
  } else {
    detector = sb::make_detector(name);
  }
  if (opt.noise_jitter > 0.0 || opt.noise_score_std > 0.0 ||
      opt.noise_drop > 0.0 || opt.noise_spurious > 0.0) {
    sb::NoisyWrapper::Params noise;
    noise.jitter_std = opt.noise_jitter;
    noise.score_std = opt.noise_score_std;
    noise.drop_rate = opt.noise_drop;
    noise.spurious_rate = opt.noise_spurious;
    detector = std::make_unique<sb::NoisyWrapper>(std::move(detector), noise);
  }
  return detector;
}

std::vector<sb::StreamScenario> load_scenarios(const CommonOptions& opt) {
  std::vector<sb::StreamScenario> scenarios;
  if (!opt.scenario_spec.empty()) {
    std::vector<std::string> warnings;
    scenarios.push_back(sb::generate_scenario(
        sb::load_scenario_spec(opt.scenario_spec), &warnings));
    for (const std::string& w : warnings) {
      std::cerr << "warning: " << w << '\n';
    }
  } else if (!opt.annotations.empty()) {
    scenarios = sb::load_coco_stream(opt.annotations);
  } else {
    throw sb::ConfigError("need --annotations or --scenario-spec");
  }
  if (opt.frame_period > 0.0) {
    for (sb::StreamScenario& s : scenarios) {
      s.frame_period = opt.frame_period;
      for (sb::FrameTruth& f : s.frames) {
        f.timestamp = f.frame_index * opt.frame_period;
      }
    }
  }
  return scenarios;
}

sb::StreamPolicy make_policy(const CommonOptions& opt) {
  sb::StreamPolicy policy;
  policy.mode = sb::parse_stream_mode(opt.policy);
  policy.horizon = opt.k;
  policy.warmup_frames = opt.warmup;
  return policy;
}

sb::SimConfig make_sim_config(const CommonOptions& common,
                              const LatencyOptions& latency,
                              const sb::WindowSpec& window) {
  sb::SimConfig config;
  config.policy = make_policy(common);
  config.window = window;
  config.latency.kind = sb::parse_latency_kind(latency.kind);
  config.latency.mean = latency.mean;
  config.latency.std_dev = latency.std_dev;
  config.latency.floor = latency.floor;
  config.seed = common.seed;
  return config;
}

void write_reports(const sb::KStepReport& report, const CommonOptions& opt,
                   const std::string& basename) {
  fs::create_directories(opt.out_dir);
  for (const std::string& format : opt.formats) {
    sb::write_report(report, format,
                     fs::path(opt.out_dir) / (basename + "." + format));
  }
}

/// Runs fn(i) for i in [0, count) with at most `jobs` in flight; results
/// land in index order so output never depends on scheduling.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> inflight;
  for (int i = 0; i < count; ++i) {
    if (static_cast<int>(inflight.size()) >= jobs) {
      inflight.front().get();
      inflight.erase(inflight.begin());
    }
    inflight.push_back(std::async(std::launch::async, fn, i));
  }
  for (auto& f : inflight) f.get();
}

int cmd_eval(const CommonOptions& common, const std::string& results_path) {
  const auto scenarios = load_scenarios(common);
  sb::ResultTimeline timeline = sb::load_results(results_path);

  const sb::StreamScenario* scenario = &scenarios.front();
  if (!timeline.sequence_id.empty()) {
    const auto it = std::find_if(scenarios.begin(), scenarios.end(),
                                 [&](const sb::StreamScenario& s) {
                                   return s.sequence_id ==
                                          timeline.sequence_id;
                                 });
    if (it == scenarios.end()) {
      throw sb::ConfigError("results sequence '" + timeline.sequence_id +
                            "' not present in the annotations");
    }
    scenario = &*it;
  }
  for (const sb::EmittedResult& r : timeline.results) {
    if (r.source_frame < 0 || r.source_frame >= scenario->frame_count()) {
      throw sb::InvariantError("result source_frame " +
                               std::to_string(r.source_frame) +
                               " outside the scenario");
    }
    if (r.emit_time < scenario->frames[r.source_frame].timestamp) {
      throw sb::InvariantError(
          "result emitted before its source frame's timestamp");
    }
  }

  const sb::KStepReport report =
      sb::streaming_ap(timeline, *scenario, make_policy(common));
  write_reports(report, common, "report");
  std::printf("sAP1 %s\n",
              std::isnan(report.aggregate.at(1).ap)
                  ? "n/a"
                  : std::to_string(report.aggregate.at(1).ap).c_str());
  return kExitOk;
}

int cmd_simulate(const CommonOptions& common, const DetectorOptions& det,
                 const LatencyOptions& latency, const sb::WindowSpec& window) {
  const auto scenarios = load_scenarios(common);
  const sb::SimConfig config = make_sim_config(common, latency, window);

  std::vector<sb::SimRun> runs(scenarios.size());
  parallel_for(static_cast<int>(scenarios.size()), common.jobs, [&](int i) {
    auto detector = build_detector(det.detectors.front(), det);
    runs[i] = sb::run(scenarios[i], *detector, config);
  });

  fs::create_directories(common.out_dir);
  std::vector<std::pair<const sb::ResultTimeline*, const sb::StreamScenario*>>
      sequences;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    sequences.push_back({&runs[i].timeline, &scenarios[i]});
    const std::string name = scenarios.size() == 1
                                 ? std::string("results.json")
                                 : "results_" + scenarios[i].sequence_id +
                                       ".json";
    sb::save_timeline(runs[i].timeline, fs::path(common.out_dir) / name);
    for (int frame : runs[i].stats.deadline_misses) {
      std::cerr << "deadline miss: sequence '" << scenarios[i].sequence_id
                << "' frame " << frame << '\n';
    }
  }
  const sb::KStepReport report =
      sb::streaming_ap_pooled(sequences, config.policy);
  write_reports(report, common, "report");
  return kExitOk;
}

int cmd_ksweep(const CommonOptions& common, const DetectorOptions& det,
               const LatencyOptions& latency,
               const std::vector<int>& n_grid,
               const std::vector<int>& step_grid) {
  const auto scenarios = load_scenarios(common);
  if (scenarios.size() != 1) {
    throw sb::ConfigError("ksweep expects a single-sequence scenario");
  }
  const sb::StreamScenario& scenario = scenarios.front();

  struct Cell {
    std::string detector;
    sb::WindowSpec window;
    sb::KStepReport report;
  };
  std::vector<Cell> cells;
  for (const std::string& name : det.detectors) {
    for (int n : n_grid) {
      for (int step : n == 0 ? std::vector<int>{1} : step_grid) {
        cells.push_back({name, sb::WindowSpec{n, step}, {}});
      }
    }
  }

  parallel_for(static_cast<int>(cells.size()), common.jobs, [&](int i) {
    auto detector = build_detector(cells[i].detector, det);
    const sb::SimConfig config =
        make_sim_config(common, latency, cells[i].window);
    const sb::SimRun sim = sb::run(scenario, *detector, config);
    cells[i].report = sb::streaming_ap(sim.timeline, scenario, config.policy);
  });

  fs::create_directories(common.out_dir);
  std::vector<std::pair<std::string, const sb::KStepReport*>> series;
  for (const Cell& cell : cells) {
    const std::string label = cell.detector + "_n" +
                              std::to_string(cell.window.n_support) + "_s" +
                              std::to_string(cell.window.step);
    write_reports(cell.report, common, "sweep_" + label);
    series.push_back({label, &cell.report});
  }
  sb::write_multi_svg(series, fs::path(common.out_dir) / "ksweep.svg");
  return kExitOk;
}

int cmd_selfcheck(std::uint64_t seed, double tolerance_scale) {
  const auto results = sb::run_selfcheck(seed, tolerance_scale);
  bool all_pass = true;
  std::printf("%-36s %-12s %-12s %s\n", "property", "max_error", "tolerance",
              "status");
  for (const auto& r : results) {
    std::printf("%-36s %-12.3e %-12.3e %s\n", r.property.c_str(), r.max_error,
                r.tolerance, r.pass ? "pass" : "FAIL");
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) {
    for (const auto& r : results) {
      if (!r.pass) std::fprintf(stderr, "selfcheck failed: %s\n",
                                r.property.c_str());
    }
  }
  return all_pass ? kExitOk : kExitSelfCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latency-aware streaming perception benchmark engine"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; command line "
                                 "overrides");
  app.allow_config_extras(CLI::config_extras_mode::error);

  CommonOptions eval_common, sim_common, sweep_common;
  DetectorOptions sim_det, sweep_det;
  LatencyOptions sim_latency, sweep_latency;
  std::string results_path;
  int sim_n_support = 0, sim_step = 1;
  std::vector<int> n_grid = {0, 1, 2}, step_grid = {1, 2};
  std::uint64_t selfcheck_seed = 0;
  double tolerance_scale = 1.0;

  CLI::App* eval = app.add_subcommand(
      "eval", "score a recorded result timeline against annotations");
  add_common(eval, eval_common);
  eval->add_option("--results", results_path, "emitted results (JSON)")
      ->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a detector through the stream simulator");
  add_common(simulate, sim_common);
  add_detector(simulate, sim_det, false);
  add_latency(simulate, sim_latency);
  simulate->add_option("--n-support", sim_n_support,
                       "support frames N in the window")
      ->capture_default_str();
  simulate->add_option("--step", sim_step, "window step (frames)")
      ->capture_default_str();

  CLI::App* ksweep = app.add_subcommand(
      "ksweep", "sweep step horizons and (N, step) window cells");
  add_common(ksweep, sweep_common);
  add_detector(ksweep, sweep_det, true);
  add_latency(ksweep, sweep_latency);
  ksweep->add_option("--n-grid", n_grid, "window sizes N to sweep")
      ->capture_default_str();
  ksweep->add_option("--step-grid", step_grid, "window steps to sweep")
      ->capture_default_str();

  CLI::App* selfcheck = app.add_subcommand(
      "selfcheck", "run the kernel equivalence and gradient suites");
  selfcheck->add_option("--seed", selfcheck_seed, "root random seed")
      ->capture_default_str();
  selfcheck->add_option("--tolerance-scale", tolerance_scale,
                        "multiplies every tolerance (negative testing)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*eval) return cmd_eval(eval_common, results_path);
    if (*simulate) {
      return cmd_simulate(sim_common, sim_det, sim_latency,
                          sb::WindowSpec{sim_n_support, sim_step});
    }
    if (*ksweep) {
      return cmd_ksweep(sweep_common, sweep_det, sweep_latency, n_grid,
                        step_grid);
    }
    if (*selfcheck) return cmd_selfcheck(selfcheck_seed, tolerance_scale);
  } catch (const sb::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const sb::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariantError;
  }
  return kExitOk;
}
