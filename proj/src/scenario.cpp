#include "streambench/scenario.hpp"

#include <algorithm>
#include <set>

namespace streambench {

void ScenarioSpec::validate() const {
  if (frame_count < 1) throw ConfigError("scenario: frame_count must be >= 1");
  if (frame_period <= 0.0) {
    throw ConfigError("scenario: frame_period must be > 0");
  }
  if (image_width <= 0.0 || image_height <= 0.0) {
    throw ConfigError("scenario: image size must be positive");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const ObjectSpec& obj = objects[i];
    const int despawn = obj.despawn < 0 ? frame_count : obj.despawn;
    if (obj.spawn < 0 || obj.spawn >= despawn || despawn > frame_count) {
      throw ConfigError("scenario: object " + std::to_string(i) +
                        " needs 0 <= spawn < despawn <= frame_count");
    }
    if (!obj.initial.valid() || obj.initial.area() <= 0.0) {
      throw ConfigError("scenario: object " + std::to_string(i) +
                        " initial box must be valid with positive area");
    }
  }
}

StreamScenario generate_scenario(const ScenarioSpec& spec,
                                 std::vector<std::string>* warnings) {
  spec.validate();
  StreamScenario scenario;
  scenario.frame_period = spec.frame_period;
  scenario.sequence_id = spec.sequence_id;
  if (spec.categories.empty()) {
    std::set<int> ids;
    for (const ObjectSpec& obj : spec.objects) ids.insert(obj.category);
    for (int id : ids) {
      scenario.categories.push_back({id, "cat" + std::to_string(id)});
    }
  } else {
    scenario.categories = spec.categories;
  }

  std::vector<bool> ever_visible(spec.objects.size(), false);
  scenario.frames.reserve(spec.frame_count);
  for (int f = 0; f < spec.frame_count; ++f) {
    FrameTruth frame;
    frame.frame_index = f;
    frame.timestamp = f * spec.frame_period;
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const ObjectSpec& obj = spec.objects[i];
      const int despawn = obj.despawn < 0 ? spec.frame_count : obj.despawn;
      if (f < obj.spawn || f >= despawn) continue;
      const double shift_x = obj.vx * f + 0.5 * obj.ax * f * f;
      const double shift_y = obj.vy * f + 0.5 * obj.ay * f * f;
      BoundingBox box{obj.initial.x_min + shift_x, obj.initial.y_min + shift_y,
                      obj.initial.x_max + shift_x, obj.initial.y_max + shift_y};
      box.x_min = std::clamp(box.x_min, 0.0, spec.image_width);
      box.x_max = std::clamp(box.x_max, 0.0, spec.image_width);
      box.y_min = std::clamp(box.y_min, 0.0, spec.image_height);
      box.y_max = std::clamp(box.y_max, 0.0, spec.image_height);
      if (box.area() <= 0.0) continue;  // fully clipped away
      ever_visible[i] = true;
      frame.objects.push_back({box, obj.category, box.area(), false});
    }
    scenario.frames.push_back(std::move(frame));
  }

  if (warnings) {
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      if (!ever_visible[i]) {
        warnings->push_back("object " + std::to_string(i) +
                            " is outside the image for its whole life");
      }
    }
  }
  return scenario;
}

}  // namespace streambench
