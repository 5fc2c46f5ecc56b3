#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "streambench/detectors.hpp"
#include "streambench/simulator.hpp"
#include "streambench/streaming.hpp"

using namespace streambench;

namespace {

/// Records what the simulator feeds it; used to probe window plumbing and
/// the state-update contract.
class ProbeDetector : public DetectorModel {
 public:
  explicit ProbeDetector(bool corrupt_state = false)
      : corrupt_state_(corrupt_state) {}
  void init(const std::vector<CategoryInfo>&, std::uint64_t) override {}
  StepOutput step(const StepInput& input,
                  const DetectorState& state) const override {
    windows.push_back(input.window);
    StepOutput out;
    for (int k = 1; k <= input.horizons; ++k) out.forecasts[k] = {};
    out.state = state;
    out.state.last_updated = corrupt_state_ ? input.frame - 1 : input.frame;
    return out;
  }
  std::string name() const override { return "probe"; }

  mutable std::vector<std::vector<int>> windows;

 private:
  bool corrupt_state_;
};

}  // namespace

TEST_CASE("real-time constant latency processes every frame") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(25, 64, 4));
  PerfectForecaster detector;
  const SimConfig config = helpers::realtime_config(3);
  const SimRun sim = run(scenario, detector, config);
  CHECK(sim.stats.processed_frames == 25);
  CHECK(sim.stats.skipped_frames == 0);
  CHECK(sim.stats.deadline_misses.empty());
  // one emitted result per horizon per processed frame
  CHECK(sim.timeline.results.size() == 25 * 3);
  // emit times are arrival + latency, sorted
  double prev = -1.0;
  for (const EmittedResult& r : sim.timeline.results) {
    CHECK(r.emit_time ==
          scenario.frames[r.source_frame].timestamp + config.latency.mean);
    CHECK(r.emit_time >= prev);
    prev = r.emit_time;
  }
}

TEST_CASE("perfect forecaster under 0.9-period latency scores 1.0") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(30, 64, 8));
  PerfectForecaster detector;
  const SimConfig config = helpers::realtime_config(1);
  const SimRun sim = run(scenario, detector, config);
  const KStepReport report =
      streaming_ap(sim.timeline, scenario, config.policy);
  CHECK(report.aggregate.at(1).ap == 1.0);
}

TEST_CASE("real-time mode rejects constant latency at or above the period") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 0));
  DelayedOracle detector;
  SimConfig config = helpers::realtime_config(1);
  config.latency.mean = scenario.frame_period;
  CHECK_THROWS_AS(run(scenario, detector, config), ConfigError);
}

TEST_CASE("stochastic deadline misses are recorded, results still emitted") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(60, 64, 0));
  DelayedOracle detector;
  SimConfig config = helpers::realtime_config(1);
  config.latency.kind = LatencyKind::kGaussianClamped;
  config.latency.mean = 0.8 / 30.0;
  config.latency.std_dev = 0.4 / 30.0;
  config.latency.floor = 1e-4;
  config.seed = 7;
  const SimRun sim = run(scenario, detector, config);
  CHECK(sim.stats.processed_frames == 60);
  CHECK(sim.timeline.results.size() == 60);  // late ones included
  CHECK(!sim.stats.deadline_misses.empty());
  for (int frame : sim.stats.deadline_misses) {
    CHECK(frame >= 0);
    CHECK(frame < 60);
  }
}

TEST_CASE("non-real-time pipelines skip arrivals while busy") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 0));
  ProbeDetector detector;
  SimConfig config;
  config.policy.mode = StreamMode::kNonRealTime;
  config.policy.horizon = 1;
  config.latency.kind = LatencyKind::kConstant;
  config.latency.mean = 1.5 / 30.0;
  const SimRun sim = run(scenario, detector, config);
  // frames 0, 2, 4, 6, 8: finish at t+1.5, resume at the next arrival
  std::set<int> processed;
  for (const EmittedResult& r : sim.timeline.results) {
    processed.insert(r.source_frame);
  }
  CHECK(processed == std::set<int>{0, 2, 4, 6, 8});
  CHECK(sim.stats.processed_frames == 5);
  CHECK(sim.stats.skipped_frames == 5);
}

TEST_CASE("a frame arriving exactly at completion is processed") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(8, 64, 0));
  ProbeDetector detector;
  SimConfig config;
  config.policy.mode = StreamMode::kNonRealTime;
  config.latency.kind = LatencyKind::kTrace;
  // exactly two periods: frame 2 arrives the moment frame 0 finishes
  config.latency.trace = {2.0 * scenario.frame_period};
  const SimRun sim = run(scenario, detector, config);
  std::set<int> processed;
  for (const EmittedResult& r : sim.timeline.results) {
    processed.insert(r.source_frame);
  }
  CHECK(processed == std::set<int>{0, 2, 4, 6});
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(30, 64, 4));
  NoisyWrapper::Params params;
  params.jitter_std = 1.0;
  params.drop_rate = 0.1;
  SimConfig config = helpers::realtime_config(2, 1, 1, 0, 42);
  config.latency.kind = LatencyKind::kGaussianClamped;
  config.latency.mean = 0.5 / 30.0;
  config.latency.std_dev = 0.1 / 30.0;

  NoisyWrapper a(std::make_unique<ConstantVelocityForecaster>(), params);
  const SimRun run_a = run(scenario, a, config);
  NoisyWrapper b(std::make_unique<ConstantVelocityForecaster>(), params);
  const SimRun run_b = run(scenario, b, config);
  CHECK(helpers::timelines_equal(run_a.timeline, run_b.timeline));

  // a different seed actually changes something
  config.seed = 43;
  NoisyWrapper c(std::make_unique<ConstantVelocityForecaster>(), params);
  const SimRun run_c = run(scenario, c, config);
  CHECK(!helpers::timelines_equal(run_a.timeline, run_c.timeline));
}

TEST_CASE("detector state contract is enforced") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(5, 64, 0));
  ProbeDetector bad(true);
  CHECK_THROWS_AS(run(scenario, bad, helpers::realtime_config(1)),
                  InvariantError);
}

TEST_CASE("the window spec reaches the detector") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(6, 64, 0));
  ProbeDetector probe;
  run(scenario, probe, helpers::realtime_config(1, 2, 2));
  REQUIRE(probe.windows.size() == 6);
  CHECK(probe.windows[0] == std::vector<int>{0, 0, 0});
  CHECK(probe.windows[5] == std::vector<int>{5, 3, 1});

  ProbeDetector current_only;
  run(scenario, current_only, helpers::realtime_config(1, 0, 1));
  for (const auto& window : current_only.windows) {
    CHECK(window.size() == 1);  // (N=0): only the current frame
  }
}

TEST_CASE("latency traces cycle over processed frames") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(6, 64, 0));
  DelayedOracle detector;
  SimConfig config = helpers::realtime_config(1);
  config.latency.kind = LatencyKind::kTrace;
  config.latency.trace = {0.010, 0.020};
  const SimRun sim = run(scenario, detector, config);
  for (const EmittedResult& r : sim.timeline.results) {
    const double latency =
        r.emit_time - scenario.frames[r.source_frame].timestamp;
    CHECK(latency ==
          doctest::Approx(r.source_frame % 2 == 0 ? 0.010 : 0.020));
  }
  SimConfig bad = config;
  bad.latency.trace = {0.010, -0.5};
  CHECK_THROWS_AS(run(scenario, detector, bad), ConfigError);
}

TEST_CASE("sweep_window runs one simulation per cell") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(40, 64, 2, 0.5));
  ConstantVelocityForecaster detector;
  const SimConfig config = helpers::realtime_config(1, 0, 1, 2);
  const std::vector<WindowSpec> grid = {{0, 1}, {1, 1}, {2, 1}};
  const auto cells = sweep_window(scenario, detector, config, grid);
  REQUIRE(cells.size() == 3);

  // accelerating object: any history beats none, more history never hurts
  const double sap0 = cells[0].report.aggregate.at(1).ap;
  const double sap1 = cells[1].report.aggregate.at(1).ap;
  const double sap2 = cells[2].report.aggregate.at(1).ap;
  CHECK(sap1 > sap0);
  CHECK(sap2 >= sap1 - 1e-12);

  // a single-cell sweep equals a direct run
  SimConfig direct_config = config;
  direct_config.window = {1, 1};
  ConstantVelocityForecaster fresh;
  const SimRun direct = run(scenario, fresh, direct_config);
  const KStepReport want =
      streaming_ap(direct.timeline, scenario, config.policy);
  CHECK(cells[1].report.aggregate.at(1).ap == want.aggregate.at(1).ap);

  CHECK_THROWS_AS(sweep_window(scenario, detector, config, {}), ConfigError);
}
