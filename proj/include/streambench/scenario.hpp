#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streambench/types.hpp"

namespace streambench {

/// One synthetic object: a box translating with per-frame velocity and
/// acceleration, alive on frames [spawn, despawn).
struct ObjectSpec {
  int category = 0;
  BoundingBox initial;
  double vx = 0.0, vy = 0.0;  // pixels per frame
  double ax = 0.0, ay = 0.0;  // pixels per frame^2
  int spawn = 0;
  int despawn = -1;  // -1 => lives until the last frame
};

/// Deterministic stand-in for an annotated driving sequence.
struct ScenarioSpec {
  int frame_count = 0;
  double frame_period = 1.0 / 30.0;
  double image_width = 1920.0;
  double image_height = 1200.0;
  std::uint64_t seed = 0;
  std::string sequence_id = "synthetic-0";
  std::vector<ObjectSpec> objects;
  std::vector<CategoryInfo> categories;  // derived from objects when empty

  void validate() const;  // throws ConfigError on bad spawns or geometry
};

/// Materializes the spec: per frame f, each live object's box is the
/// initial box translated by v*f + a*f^2/2, clipped to the image; objects
/// whose clipped area reaches zero are dropped for that frame. Pure
/// function of the spec.
StreamScenario generate_scenario(const ScenarioSpec& spec,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace streambench
