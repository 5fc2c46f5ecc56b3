#pragma once

#include "streambench/scenario.hpp"
#include "streambench/simulator.hpp"

namespace helpers {

using namespace streambench;

/// One square object of `side` pixels translating at vx px/frame.
inline ScenarioSpec moving_square(int frames, double side, double vx,
                                  double ax = 0.0, int spawn = 0,
                                  int despawn = -1) {
  ScenarioSpec spec;
  spec.frame_count = frames;
  spec.image_width = 4096.0;
  spec.image_height = 1024.0;
  spec.sequence_id = "test-seq";
  ObjectSpec obj;
  obj.category = 1;
  obj.initial = {64.0, 256.0, 64.0 + side, 256.0 + side};
  obj.vx = vx;
  obj.ax = ax;
  obj.spawn = spawn;
  obj.despawn = despawn;
  spec.objects.push_back(obj);
  return spec;
}

inline SimConfig realtime_config(int horizon, int n_support = 0, int step = 1,
                                 int warmup = 0, std::uint64_t seed = 0) {
  SimConfig config;
  config.policy.mode = StreamMode::kRealTime;
  config.policy.horizon = horizon;
  config.policy.warmup_frames = warmup;
  config.window = {n_support, step};
  config.latency.kind = LatencyKind::kConstant;
  config.latency.mean = 0.9 / 30.0;
  config.seed = seed;
  return config;
}

inline bool timelines_equal(const ResultTimeline& a, const ResultTimeline& b) {
  if (a.sequence_id != b.sequence_id ||
      a.results.size() != b.results.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    const EmittedResult& x = a.results[i];
    const EmittedResult& y = b.results[i];
    if (x.source_frame != y.source_frame || x.horizon != y.horizon ||
        x.emit_time != y.emit_time || x.detections != y.detections) {
      return false;
    }
  }
  return true;
}

}  // namespace helpers
