#include "streambench/types.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace streambench {

void StreamScenario::validate() const {
  if (frame_period <= 0.0 || !std::isfinite(frame_period)) {
    throw InvariantError("frame_period must be positive and finite");
  }
  std::unordered_set<int> known;
  for (const auto& c : categories) known.insert(c.id);
  double prev_ts = -1.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (f.frame_index != static_cast<int>(i)) {
      throw InvariantError("scenario '" + sequence_id +
                           "': frames must be contiguous from 0, got index " +
                           std::to_string(f.frame_index) + " at position " +
                           std::to_string(i));
    }
    if (f.timestamp <= prev_ts) {
      throw InvariantError("scenario '" + sequence_id +
                           "': timestamps must be strictly increasing");
    }
    prev_ts = f.timestamp;
    for (const auto& obj : f.objects) {
      if (!obj.bbox.valid()) {
        throw InvariantError("scenario '" + sequence_id + "' frame " +
                             std::to_string(f.frame_index) +
                             ": invalid bounding box");
      }
      if (!known.empty() && known.find(obj.category) == known.end()) {
        throw InvariantError("scenario '" + sequence_id + "' frame " +
                             std::to_string(f.frame_index) +
                             ": unknown category id " +
                             std::to_string(obj.category));
      }
    }
  }
}

std::vector<int> make_window(const StreamScenario& scenario, int t,
                             const WindowSpec& spec) {
  if (t < 0 || t >= scenario.frame_count()) {
    throw RangeError("make_window: frame index " + std::to_string(t) +
                     " outside scenario of " +
                     std::to_string(scenario.frame_count()) + " frames");
  }
  if (spec.n_support < 0 || spec.step < 1) {
    throw RangeError("make_window: invalid window spec (n_support >= 0, step >= 1)");
  }
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(spec.n_support) + 1);
  for (int i = 0; i <= spec.n_support; ++i) {
    indices.push_back(std::max(0, t - i * spec.step));
  }
  return indices;
}

void ResultTimeline::sort() {
  std::stable_sort(results.begin(), results.end(),
                   [](const EmittedResult& a, const EmittedResult& b) {
                     if (a.emit_time != b.emit_time)
                       return a.emit_time < b.emit_time;
                     if (a.source_frame != b.source_frame)
                       return a.source_frame < b.source_frame;
                     return a.horizon < b.horizon;
                   });
}

void ResultTimeline::validate() const {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (r.horizon < 1) {
      throw InvariantError("timeline: horizon must be >= 1");
    }
    if (!std::isfinite(r.emit_time) || r.emit_time < 0.0) {
      throw InvariantError("timeline: emit_time must be finite and >= 0");
    }
    if (r.emit_time < prev) {
      throw InvariantError("timeline: emit_time regresses in list order");
    }
    prev = r.emit_time;
    for (const auto& d : r.detections) {
      if (!d.bbox.valid()) {
        throw InvariantError("timeline: invalid detection box");
      }
      if (!(d.score >= 0.0 && d.score <= 1.0)) {
        throw InvariantError("timeline: detection score outside [0, 1]");
      }
    }
  }
}

}  // namespace streambench
