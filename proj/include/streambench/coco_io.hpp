#pragma once

#include <filesystem>
#include <limits>
#include <vector>

#include "streambench/scenario.hpp"
#include "streambench/types.hpp"

namespace streambench {

/// Key names for the stream tags inside COCO `images` entries; releases
/// differ, so both are configurable.
struct CocoLoadOptions {
  std::string sequence_key = "sid";
  std::string frame_key = "fid";
  double default_frame_period = 1.0 / 30.0;  // overridden by a top-level
                                             // "frame_period" when present
};

/// Loads COCO-style annotations into one scenario per sequence, frames
/// ordered by their frame index. Boxes are converted from [x, y, w, h] to
/// corner form; integer pixels are promoted to doubles. Throws ParseError
/// with the offending entity named on malformed input.
std::vector<StreamScenario> load_coco_stream(
    const std::filesystem::path& path, const CocoLoadOptions& options = {});

/// Loads an emitted-result timeline: either a JSON array of records
/// (source_frame, horizon, emit_time, detections with bbox [x,y,w,h],
/// category_id, score) or an object {"sequence_id": ..., "results": [...]}.
/// Records are sorted by emit_time; an input record more than
/// sort_tolerance seconds older than the running maximum is an error.
ResultTimeline load_results(
    const std::filesystem::path& path,
    double sort_tolerance = std::numeric_limits<double>::infinity());

/// Writes the timeline in the schema load_results reads back.
void save_timeline(const ResultTimeline& timeline,
                   const std::filesystem::path& path);

/// Reads a synthetic ScenarioSpec from JSON.
ScenarioSpec load_scenario_spec(const std::filesystem::path& path);

}  // namespace streambench
