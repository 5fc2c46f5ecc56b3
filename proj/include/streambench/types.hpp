#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "streambench/errors.hpp"

namespace streambench {

/// Axis-aligned box in continuous image coordinates, corner form.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool finite() const {
    return std::isfinite(x_min) && std::isfinite(y_min) &&
           std::isfinite(x_max) && std::isfinite(y_max);
  }
  bool valid() const { return finite() && x_max >= x_min && y_max >= y_min; }

  /// COCO-style [x, y, w, h] with top-left origin.
  static BoundingBox from_xywh(double x, double y, double w, double h) {
    return {x, y, x + w, y + h};
  }

  bool operator==(const BoundingBox& other) const = default;
};

struct Detection {
  BoundingBox bbox;
  int category = 0;
  double score = 0.0;

  bool operator==(const Detection& other) const = default;
};

/// One annotated object of a ground-truth frame. `area` defaults to the box
/// area but annotations may override it; `ignore` marks regions that absorb
/// matches without counting as TP or FP.
struct TruthObject {
  BoundingBox bbox;
  int category = 0;
  double area = 0.0;
  bool ignore = false;
};

struct FrameTruth {
  int frame_index = 0;
  double timestamp = 0.0;  // seconds; frame_index * frame_period
  std::vector<TruthObject> objects;
};

struct CategoryInfo {
  int id = 0;
  std::string name;
};

/// A fixed-rate ground-truth frame sequence.
struct StreamScenario {
  double frame_period = 1.0 / 30.0;  // seconds; Argoverse-HD convention
  std::vector<FrameTruth> frames;
  std::vector<CategoryInfo> categories;
  std::string sequence_id;

  int frame_count() const { return static_cast<int>(frames.size()); }

  /// Checks frame contiguity, timestamp monotonicity and known categories.
  void validate() const;
};

/// Support-frame windowing: N history frames spaced `step` frames apart.
struct WindowSpec {
  int n_support = 0;  // N >= 0
  int step = 1;       // frames between support samples, >= 1
};

/// Frame indices [t, t - step, ..., t - n_support*step], clamped at 0 so the
/// window length stays constant at the start of a stream.
std::vector<int> make_window(const StreamScenario& scenario, int t,
                             const WindowSpec& spec);

/// One forecast emitted by the pipeline: produced from `source_frame`,
/// targeting the frame `horizon` periods later, available at `emit_time`.
struct EmittedResult {
  int source_frame = 0;
  int horizon = 1;
  std::vector<Detection> detections;
  double emit_time = 0.0;  // seconds
};

struct ResultTimeline {
  std::string sequence_id;
  std::vector<EmittedResult> results;  // emit_time non-decreasing

  /// Stable sort by emit_time, ties by source_frame then horizon.
  void sort();
  /// Throws InvariantError if any record violates its field invariants.
  void validate() const;
};

}  // namespace streambench
