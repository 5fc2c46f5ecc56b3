#include "streambench/simulator.hpp"

#include <cmath>

#include "streambench/rng.hpp"

namespace streambench {

LatencyKind parse_latency_kind(const std::string& name) {
  if (name == "constant") return LatencyKind::kConstant;
  if (name == "gaussian" || name == "gaussian_clamped") {
    return LatencyKind::kGaussianClamped;
  }
  if (name == "trace") return LatencyKind::kTrace;
  throw ConfigError("unknown latency kind '" + name + "'");
}

std::string to_string(LatencyKind kind) {
  switch (kind) {
    case LatencyKind::kConstant: return "constant";
    case LatencyKind::kGaussianClamped: return "gaussian_clamped";
    case LatencyKind::kTrace: return "trace";
  }
  return "?";
}

void SimConfig::validate(double frame_period) const {
  if (policy.horizon < 1) {
    throw ConfigError("policy horizon must be >= 1");
  }
  if (window.n_support < 0 || window.step < 1) {
    throw ConfigError("window: n_support must be >= 0 and step >= 1");
  }
  if (latency.floor <= 0.0) {
    throw ConfigError("latency floor must be > 0");
  }
  switch (latency.kind) {
    case LatencyKind::kConstant:
      if (latency.mean <= 0.0) {
        throw ConfigError("constant latency must be > 0");
      }
      if (policy.mode == StreamMode::kRealTime &&
          latency.mean >= frame_period) {
        throw ConfigError(
            "real-time mode with constant latency requires mean < "
            "frame_period");
      }
      break;
    case LatencyKind::kGaussianClamped:
      if (latency.mean <= 0.0 || latency.std_dev < 0.0) {
        throw ConfigError("gaussian latency requires mean > 0 and std >= 0");
      }
      break;
    case LatencyKind::kTrace:
      if (latency.trace.empty()) {
        throw ConfigError("trace latency requires a non-empty trace");
      }
      for (double v : latency.trace) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ConfigError("trace latency values must be positive and finite");
        }
      }
      break;
  }
}

namespace {

class LatencySampler {
 public:
  LatencySampler(const LatencyModel& model, std::uint64_t seed)
      : model_(model),
        rng_(substream_seed(seed ^ model.seed_salt, "latency")) {}

  /// Latency for the n-th processed frame (draw order, not frame index, so
  /// skipping frames in non-real-time mode keeps the stream aligned).
  double sample() {
    switch (model_.kind) {
      case LatencyKind::kConstant:
        return model_.mean;
      case LatencyKind::kGaussianClamped: {
        const double v = model_.mean + model_.std_dev * rng_.next_normal();
        return std::max(v, model_.floor);
      }
      case LatencyKind::kTrace: {
        const double v = model_.trace[cursor_ % model_.trace.size()];
        ++cursor_;
        return v;
      }
    }
    return model_.mean;
  }

 private:
  const LatencyModel& model_;
  Rng rng_;
  std::size_t cursor_ = 0;
};

}  // namespace

SimRun run(const StreamScenario& scenario, DetectorModel& detector,
           const SimConfig& config) {
  scenario.validate();
  config.validate(scenario.frame_period);
  detector.init(scenario.categories, config.seed);

  SimRun out;
  out.timeline.sequence_id = scenario.sequence_id;
  LatencySampler latency(config.latency, config.seed);
  DetectorState state;

  int frame = 0;
  while (frame < scenario.frame_count()) {
    const double arrival = scenario.frames[frame].timestamp;
    const double completion = arrival + latency.sample();

    StepInput input;
    input.scenario = &scenario;
    input.window = make_window(scenario, frame, config.window);
    input.frame = frame;
    input.horizons = config.policy.horizon;
    input.window_spec = config.window;

    StepOutput step = detector.step(input, state);
    if (step.state.last_updated != frame) {
      throw InvariantError("detector must update its state exactly once per "
                           "processed frame");
    }
    if (state.last_updated >= step.state.last_updated) {
      throw InvariantError("detector state last_updated must strictly increase");
    }
    state = std::move(step.state);

    for (int k = 1; k <= config.policy.horizon; ++k) {
      EmittedResult result;
      result.source_frame = frame;
      result.horizon = k;
      result.emit_time = completion;
      auto it = step.forecasts.find(k);
      if (it != step.forecasts.end()) result.detections = std::move(it->second);
      out.timeline.results.push_back(std::move(result));
    }
    ++out.stats.processed_frames;

    if (config.policy.mode == StreamMode::kRealTime) {
      if (frame + 1 < scenario.frame_count() &&
          completion > scenario.frames[frame + 1].timestamp) {
        out.stats.deadline_misses.push_back(frame);
      }
      ++frame;
    } else {
      // Skip frames that arrived while busy; resume at the next arrival
      // (a frame arriving exactly at completion counts as available).
      int next = frame + 1;
      while (next < scenario.frame_count() &&
             scenario.frames[next].timestamp < completion) {
        ++out.stats.skipped_frames;
        ++next;
      }
      frame = next;
    }
  }

  out.timeline.sort();
  return out;
}

std::vector<SweepCell> sweep_window(const StreamScenario& scenario,
                                    DetectorModel& detector,
                                    const SimConfig& config,
                                    const std::vector<WindowSpec>& grid,
                                    const EvalOptions& options) {
  if (grid.empty()) {
    throw ConfigError("sweep_window: grid must be non-empty");
  }
  std::vector<SweepCell> cells;
  cells.reserve(grid.size());
  for (const WindowSpec& window : grid) {
    SimConfig cell_config = config;
    cell_config.window = window;
    const SimRun sim = run(scenario, detector, cell_config);
    cells.push_back(
        {window, streaming_ap(sim.timeline, scenario, config.policy, options)});
  }
  return cells;
}

}  // namespace streambench
