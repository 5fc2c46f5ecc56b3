#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "streambench/detectors.hpp"
#include "streambench/simulator.hpp"
#include "streambench/streaming.hpp"

using namespace streambench;

namespace {

StepInput input_at(const StreamScenario& scenario, int frame, int horizons,
                   const WindowSpec& window) {
  StepInput input;
  input.scenario = &scenario;
  input.window = make_window(scenario, frame, window);
  input.frame = frame;
  input.horizons = horizons;
  input.window_spec = window;
  return input;
}

bool forecasts_equal(const Forecasts& a, const Forecasts& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, dets] : a) {
    auto it = b.find(k);
    if (it == b.end() || it->second != dets) return false;
  }
  return true;
}

double single_box_error(const std::vector<Detection>& dets,
                        const BoundingBox& want) {
  REQUIRE(dets.size() == 1);
  const BoundingBox& got = dets[0].bbox;
  return std::max({std::abs(got.x_min - want.x_min),
                   std::abs(got.y_min - want.y_min),
                   std::abs(got.x_max - want.x_max),
                   std::abs(got.y_max - want.y_max)});
}

double run_sap(const StreamScenario& scenario, DetectorModel& detector,
               int horizon, int n_support, int warmup) {
  const SimConfig config =
      helpers::realtime_config(horizon, n_support, 1, warmup);
  const SimRun sim = run(scenario, detector, config);
  return streaming_ap(sim.timeline, scenario, config.policy)
      .aggregate.at(horizon)
      .ap;
}

}  // namespace

TEST_CASE("perfect forecaster reproduces future truths") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 8));
  PerfectForecaster detector;
  const StepInput input = input_at(scenario, 4, 3, {0, 1});
  const auto [forecasts, state] = detector.step(input, DetectorState{});
  CHECK(state.last_updated == 4);
  for (int k = 1; k <= 3; ++k) {
    REQUIRE(forecasts.at(k).size() == 1);
    CHECK(forecasts.at(k)[0].bbox == scenario.frames[4 + k].objects[0].bbox);
    CHECK(forecasts.at(k)[0].category ==
          scenario.frames[4 + k].objects[0].category);
  }
}

TEST_CASE("perfect forecaster emits empty beyond the sequence end") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(6, 64, 8));
  PerfectForecaster detector;
  const StepInput input = input_at(scenario, 5, 3, {0, 1});
  const auto [forecasts, state] = detector.step(input, DetectorState{});
  for (int k = 1; k <= 3; ++k) CHECK(forecasts.at(k).empty());
}

TEST_CASE("perfect forecasts are copies, not aliases") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 8));
  PerfectForecaster detector;
  const StepInput input = input_at(scenario, 2, 1, {0, 1});
  auto [forecasts, state] = detector.step(input, DetectorState{});
  forecasts.at(1)[0].bbox.x_min = -1.0;
  CHECK(scenario.frames[3].objects[0].bbox.x_min >= 0.0);
}

TEST_CASE("delayed oracle replicates the current frame on all horizons") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 8));
  DelayedOracle detector;
  const StepInput input = input_at(scenario, 4, 4, {0, 1});
  const auto [forecasts, state] = detector.step(input, DetectorState{});
  for (int k = 1; k <= 4; ++k) {
    REQUIRE(forecasts.at(k).size() == 1);
    CHECK(forecasts.at(k)[0].bbox == scenario.frames[4].objects[0].bbox);
  }
}

TEST_CASE("every detector is a pure function of (input, state)") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(12, 64, 8, 0.5));
  for (const char* name : {"perfect", "delayed", "const-velocity"}) {
    auto detector = make_detector(name);
    detector->init(scenario.categories, 3);
    const StepInput input = input_at(scenario, 6, 3, {2, 1});
    DetectorState state;
    state.last_updated = 5;
    const StepOutput a = detector->step(input, state);
    const StepOutput b = detector->step(input, state);
    CHECK(forecasts_equal(a.forecasts, b.forecasts));
    CHECK(a.state.last_updated == b.state.last_updated);
  }
}

TEST_CASE("const-velocity with N=0 degenerates exactly to the delayed oracle") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(12, 64, 8));
  ConstantVelocityForecaster cv;
  DelayedOracle delayed;
  for (int frame = 0; frame < scenario.frame_count(); ++frame) {
    const StepInput input = input_at(scenario, frame, 3, {0, 1});
    const StepOutput a = cv.step(input, DetectorState{});
    const StepOutput b = delayed.step(input, DetectorState{});
    CHECK(forecasts_equal(a.forecasts, b.forecasts));
  }
}

TEST_CASE("const-velocity extrapolates linear motion exactly") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(20, 64, 8));
  ConstantVelocityForecaster detector;

  SUBCASE("step 1") {
    const StepInput input = input_at(scenario, 6, 3, {1, 1});
    const auto [forecasts, state] = detector.step(input, DetectorState{});
    for (int k = 1; k <= 3; ++k) {
      CHECK(single_box_error(forecasts.at(k),
                             scenario.frames[6 + k].objects[0].bbox) <= 1e-9);
    }
  }
  SUBCASE("step 2 divides the two-frame displacement") {
    const StepInput input = input_at(scenario, 6, 2, {2, 2});
    const auto [forecasts, state] = detector.step(input, DetectorState{});
    for (int k = 1; k <= 2; ++k) {
      CHECK(single_box_error(forecasts.at(k),
                             scenario.frames[6 + k].objects[0].bbox) <= 1e-9);
    }
  }
}

TEST_CASE("const-velocity under acceleration sits between delayed and perfect") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(30, 64, 2, 0.5));
  ConstantVelocityForecaster cv;
  DelayedOracle delayed;
  // velocity read from the last two frames lags a quadratic by a*k*(k+1)/2
  for (int frame : {10, 15, 20}) {
    const StepInput input = input_at(scenario, frame, 2, {1, 1});
    const auto cv_out = cv.step(input, DetectorState{});
    const auto delayed_out = delayed.step(input, DetectorState{});
    for (int k = 1; k <= 2; ++k) {
      const BoundingBox& want = scenario.frames[frame + k].objects[0].bbox;
      const double cv_err = single_box_error(cv_out.forecasts.at(k), want);
      const double delayed_err =
          single_box_error(delayed_out.forecasts.at(k), want);
      const double expected_lag = 0.5 * 0.5 * k * (k + 1);
      CHECK(cv_err == doctest::Approx(expected_lag).epsilon(1e-6));
      CHECK(cv_err < delayed_err);
      CHECK(cv_err > 0.0);
    }
  }
}

TEST_CASE("sAP ordering: perfect >= const-velocity >= delayed") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(40, 64, 8));
  PerfectForecaster perfect;
  ConstantVelocityForecaster cv;
  DelayedOracle delayed;
  for (int k = 1; k <= 3; ++k) {
    const double sap_perfect = run_sap(scenario, perfect, k, 1, 1);
    const double sap_cv = run_sap(scenario, cv, k, 1, 1);
    const double sap_delayed = run_sap(scenario, delayed, k, 1, 1);
    CHECK(sap_perfect == 1.0);
    CHECK(sap_cv == 1.0);  // matched motion class
    CHECK(sap_perfect >= sap_cv);
    CHECK(sap_cv > sap_delayed);
  }
}

TEST_CASE("noisy wrapper with all rates zero is the identity") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 8));
  auto inner = std::make_unique<DelayedOracle>();
  DelayedOracle reference;
  NoisyWrapper noisy(std::move(inner), {});
  noisy.init(scenario.categories, 5);
  const StepInput input = input_at(scenario, 4, 2, {0, 1});
  const StepOutput a = noisy.step(input, DetectorState{});
  const StepOutput b = reference.step(input, DetectorState{});
  CHECK(forecasts_equal(a.forecasts, b.forecasts));
}

TEST_CASE("noisy wrapper drop rate one empties every forecast") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(10, 64, 8));
  NoisyWrapper::Params params;
  params.drop_rate = 1.0;
  NoisyWrapper noisy(std::make_unique<DelayedOracle>(), params);
  noisy.init(scenario.categories, 5);
  const StepInput input = input_at(scenario, 4, 2, {0, 1});
  const StepOutput out = noisy.step(input, DetectorState{});
  CHECK(out.forecasts.at(1).empty());
  CHECK(out.forecasts.at(2).empty());

  const double sap = run_sap(scenario, noisy, 1, 0, 0);
  CHECK(sap == 0.0);
}

TEST_CASE("box jitter lands sAP strictly between the clean value and zero") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(25, 64, 0));
  DelayedOracle clean;
  const double clean_sap = run_sap(scenario, clean, 1, 0, 0);
  REQUIRE(clean_sap == 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NoisyWrapper::Params params;
    params.jitter_std = 2.0;
    NoisyWrapper noisy(std::make_unique<DelayedOracle>(), params);
    const SimConfig config = helpers::realtime_config(1, 0, 1, 0, seed);
    const SimRun sim = run(scenario, noisy, config);
    const double sap =
        streaming_ap(sim.timeline, scenario, config.policy).aggregate.at(1).ap;
    CHECK(sap < clean_sap);
    CHECK(sap > 0.0);
  }
}

TEST_CASE("noisy wrapper is deterministic for a fixed seed") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(15, 64, 4));
  NoisyWrapper::Params params;
  params.jitter_std = 1.5;
  params.drop_rate = 0.2;
  params.spurious_rate = 0.3;
  params.score_std = 0.1;
  NoisyWrapper a(std::make_unique<DelayedOracle>(), params);
  NoisyWrapper b(std::make_unique<DelayedOracle>(), params);
  const SimConfig config = helpers::realtime_config(2, 0, 1, 0, 42);
  const SimRun run_a = run(scenario, a, config);
  const SimRun run_b = run(scenario, b, config);
  CHECK(helpers::timelines_equal(run_a.timeline, run_b.timeline));
}

TEST_CASE("spurious boxes carry scores in (0, 0.5)") {
  const StreamScenario scenario =
      generate_scenario(helpers::moving_square(20, 64, 0));
  NoisyWrapper::Params params;
  params.spurious_rate = 1.0;
  NoisyWrapper noisy(std::make_unique<DelayedOracle>(), params);
  noisy.init(scenario.categories, 9);
  int spurious_seen = 0;
  for (int frame = 0; frame < scenario.frame_count(); ++frame) {
    const StepInput input = input_at(scenario, frame, 1, {0, 1});
    const StepOutput out = noisy.step(input, DetectorState{});
    for (const Detection& det : out.forecasts.at(1)) {
      if (det.score < 1.0) {
        ++spurious_seen;
        CHECK(det.score > 0.0);
        CHECK(det.score < 0.5);
      }
    }
  }
  CHECK(spurious_seen > 0);
}

TEST_CASE("unknown detector names are rejected") {
  CHECK_THROWS_AS(make_detector("yolo"), ConfigError);
}
