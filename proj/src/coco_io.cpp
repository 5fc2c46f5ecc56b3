#include "streambench/coco_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

namespace streambench {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte offset of the failure.
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

const json& require(const json& obj, const char* key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

BoundingBox bbox_from_xywh(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 4) {
    throw ParseError(where + ": bbox must be [x, y, w, h]");
  }
  const double x = arr[0].get<double>();
  const double y = arr[1].get<double>();
  const double w = arr[2].get<double>();
  const double h = arr[3].get<double>();
  if (w < 0.0 || h < 0.0) {
    throw ParseError(where + ": bbox has negative extent");
  }
  BoundingBox box = BoundingBox::from_xywh(x, y, w, h);
  if (!box.finite()) throw ParseError(where + ": bbox is not finite");
  return box;
}

}  // namespace

std::vector<StreamScenario> load_coco_stream(const std::filesystem::path& path,
                                             const CocoLoadOptions& options) {
  const json root = parse_file(path);
  const std::string where = path.filename().string();
  if (!root.is_object()) throw ParseError(where + ": expected a JSON object");

  double frame_period = options.default_frame_period;
  if (root.contains("frame_period")) {
    frame_period = root["frame_period"].get<double>();
    if (!(frame_period > 0.0)) {
      throw ParseError(where + ": frame_period must be > 0");
    }
  }

  std::vector<CategoryInfo> categories;
  std::set<int> known_categories;
  for (const json& cat : require(root, "categories", where)) {
    CategoryInfo info;
    info.id = require(cat, "id", where + " categories").get<int>();
    info.name = cat.value("name", "cat" + std::to_string(info.id));
    categories.push_back(info);
    known_categories.insert(info.id);
  }

  struct ImageRef {
    std::string sequence;
    int frame = 0;
  };
  std::map<std::int64_t, ImageRef> images;
  // sequence -> frame index -> objects
  std::map<std::string, std::map<int, std::vector<TruthObject>>> sequences;
  for (const json& img : require(root, "images", where)) {
    const auto id = require(img, "id", where + " images").get<std::int64_t>();
    const std::string img_where =
        where + " image id " + std::to_string(id);
    ImageRef ref;
    ref.sequence =
        require(img, options.sequence_key.c_str(), img_where).is_string()
            ? img[options.sequence_key].get<std::string>()
            : std::to_string(img[options.sequence_key].get<std::int64_t>());
    ref.frame = require(img, options.frame_key.c_str(), img_where).get<int>();
    if (ref.frame < 0) throw ParseError(img_where + ": negative frame index");
    if (!images.emplace(id, ref).second) {
      throw ParseError(img_where + ": duplicate image id");
    }
    auto& frames = sequences[ref.sequence];
    if (!frames.emplace(ref.frame, std::vector<TruthObject>{}).second) {
      throw ParseError(img_where + ": duplicate frame index " +
                       std::to_string(ref.frame) + " in sequence '" +
                       ref.sequence + "'");
    }
  }

  for (const json& ann : require(root, "annotations", where)) {
    const std::string ann_where =
        where + " annotation id " +
        (ann.contains("id") ? std::to_string(ann["id"].get<std::int64_t>())
                            : "?");
    const auto image_id =
        require(ann, "image_id", ann_where).get<std::int64_t>();
    const auto img_it = images.find(image_id);
    if (img_it == images.end()) {
      throw ParseError(ann_where + ": unknown image_id " +
                       std::to_string(image_id));
    }
    TruthObject obj;
    obj.bbox = bbox_from_xywh(require(ann, "bbox", ann_where), ann_where);
    obj.category = require(ann, "category_id", ann_where).get<int>();
    if (!known_categories.count(obj.category)) {
      throw ParseError(ann_where + ": unknown category_id " +
                       std::to_string(obj.category));
    }
    obj.area = ann.contains("area") ? ann["area"].get<double>()
                                    : obj.bbox.area();
    obj.ignore = ann.value("ignore", 0) != 0 || ann.value("iscrowd", 0) != 0;
    sequences[img_it->second.sequence][img_it->second.frame].push_back(obj);
  }

  std::vector<StreamScenario> scenarios;
  for (auto& [sequence_id, frames] : sequences) {
    StreamScenario scenario;
    scenario.sequence_id = sequence_id;
    scenario.frame_period = frame_period;
    scenario.categories = categories;
    int expected = 0;
    for (auto& [frame_index, objects] : frames) {
      if (frame_index != expected) {
        throw ParseError(where + ": sequence '" + sequence_id +
                         "' has non-contiguous frame indices (expected " +
                         std::to_string(expected) + ", got " +
                         std::to_string(frame_index) + ")");
      }
      FrameTruth frame;
      frame.frame_index = frame_index;
      frame.timestamp = frame_index * frame_period;
      frame.objects = std::move(objects);
      scenario.frames.push_back(std::move(frame));
      ++expected;
    }
    scenario.validate();
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

ResultTimeline load_results(const std::filesystem::path& path,
                            double sort_tolerance) {
  const json root = parse_file(path);
  const std::string where = path.filename().string();

  ResultTimeline timeline;
  const json* records = &root;
  if (root.is_object()) {
    timeline.sequence_id = root.value("sequence_id", "");
    records = &require(root, "results", where);
  }
  if (!records->is_array()) {
    throw ParseError(where + ": expected an array of result records");
  }

  double running_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < records->size(); ++i) {
    const json& rec = (*records)[i];
    const std::string rec_where = where + " record " + std::to_string(i);
    EmittedResult result;
    result.source_frame =
        require(rec, "source_frame", rec_where).get<int>();
    result.horizon = require(rec, "horizon", rec_where).get<int>();
    result.emit_time = require(rec, "emit_time", rec_where).get<double>();
    if (result.horizon < 1) {
      throw InvariantError(rec_where + ": horizon must be >= 1");
    }
    if (!std::isfinite(result.emit_time) || result.emit_time < 0.0) {
      throw InvariantError(rec_where + ": emit_time must be finite and >= 0");
    }
    if (result.emit_time < running_max - sort_tolerance) {
      throw InvariantError(rec_where +
                           ": emit_time regresses beyond the sort tolerance");
    }
    running_max = std::max(running_max, result.emit_time);
    for (const json& det : require(rec, "detections", rec_where)) {
      Detection d;
      d.bbox = bbox_from_xywh(require(det, "bbox", rec_where), rec_where);
      d.category = require(det, "category_id", rec_where).get<int>();
      d.score = require(det, "score", rec_where).get<double>();
      if (!(d.score >= 0.0 && d.score <= 1.0)) {
        throw InvariantError(rec_where + ": score outside [0, 1]");
      }
      result.detections.push_back(d);
    }
    timeline.results.push_back(std::move(result));
  }
  timeline.sort();
  timeline.validate();
  return timeline;
}

void save_timeline(const ResultTimeline& timeline,
                   const std::filesystem::path& path) {
  json records = json::array();
  for (const EmittedResult& r : timeline.results) {
    json dets = json::array();
    for (const Detection& d : r.detections) {
      dets.push_back({{"bbox",
                       {d.bbox.x_min, d.bbox.y_min, d.bbox.width(),
                        d.bbox.height()}},
                      {"category_id", d.category},
                      {"score", d.score}});
    }
    records.push_back({{"source_frame", r.source_frame},
                       {"horizon", r.horizon},
                       {"emit_time", r.emit_time},
                       {"detections", std::move(dets)}});
  }
  json root = {{"sequence_id", timeline.sequence_id},
               {"results", std::move(records)}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for write");
  out << root.dump(2) << '\n';
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& path) {
  const json root = parse_file(path);
  const std::string where = path.filename().string();
  if (!root.is_object()) throw ParseError(where + ": expected a JSON object");

  ScenarioSpec spec;
  spec.frame_count = require(root, "frame_count", where).get<int>();
  spec.frame_period = root.value("frame_period", spec.frame_period);
  spec.image_width = root.value("image_width", spec.image_width);
  spec.image_height = root.value("image_height", spec.image_height);
  spec.seed = root.value("seed", std::uint64_t{0});
  spec.sequence_id = root.value("sequence_id", spec.sequence_id);
  for (const json& obj : require(root, "objects", where)) {
    ObjectSpec o;
    o.category = require(obj, "category", where + " objects").get<int>();
    o.initial = bbox_from_xywh(require(obj, "initial", where + " objects"),
                               where + " objects");
    if (obj.contains("velocity")) {
      o.vx = obj["velocity"][0].get<double>();
      o.vy = obj["velocity"][1].get<double>();
    }
    if (obj.contains("acceleration")) {
      o.ax = obj["acceleration"][0].get<double>();
      o.ay = obj["acceleration"][1].get<double>();
    }
    o.spawn = obj.value("spawn", 0);
    o.despawn = obj.value("despawn", -1);
    spec.objects.push_back(o);
  }
  if (root.contains("categories")) {
    for (const json& cat : root["categories"]) {
      spec.categories.push_back(
          {require(cat, "id", where + " categories").get<int>(),
           cat.value("name", "")});
    }
  }
  spec.validate();
  return spec;
}

}  // namespace streambench
