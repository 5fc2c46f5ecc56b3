#include "streambench/detectors.hpp"

#include <algorithm>
#include <cmath>

#include "streambench/geometry.hpp"
#include "streambench/rng.hpp"

namespace streambench {

namespace {

std::vector<Detection> truths_as_detections(const FrameTruth& frame) {
  std::vector<Detection> dets;
  dets.reserve(frame.objects.size());
  for (const TruthObject& obj : frame.objects) {
    dets.push_back({obj.bbox, obj.category, 1.0});
  }
  return dets;
}

double pair_iou(const BoundingBox& a, const BoundingBox& b) {
  if (a.area() <= 0.0 && b.area() <= 0.0) return 0.0;
  return iou(a, b);
}

/// Greedy association by descending IoU between two object lists (same
/// category only). Returns per-`from` index the matched `to` index or -1.
template <typename A, typename B>
std::vector<int> greedy_associate(const std::vector<A>& from,
                                  const std::vector<B>& to,
                                  double min_iou,
                                  auto&& from_box, auto&& from_cat,
                                  auto&& to_box, auto&& to_cat) {
  struct Cand {
    double iou;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < static_cast<int>(from.size()); ++i) {
    for (int j = 0; j < static_cast<int>(to.size()); ++j) {
      if (from_cat(from[i]) != to_cat(to[j])) continue;
      const double v = pair_iou(from_box(from[i]), to_box(to[j]));
      if (v >= min_iou) cands.push_back({v, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> match(from.size(), -1);
  std::vector<bool> taken(to.size(), false);
  for (const Cand& c : cands) {
    if (match[c.i] >= 0 || taken[c.j]) continue;
    match[c.i] = c.j;
    taken[c.j] = true;
  }
  return match;
}

}  // namespace

StepOutput PerfectForecaster::step(const StepInput& input,
                                   const DetectorState& state) const {
  StepOutput out;
  for (int k = 1; k <= input.horizons; ++k) {
    const int target = input.frame + k;
    std::vector<Detection> dets;
    if (target < input.scenario->frame_count()) {
      dets = truths_as_detections(input.scenario->frames[target]);
    }
    out.forecasts[k] = std::move(dets);
  }
  out.state = state;
  out.state.last_updated = input.frame;
  return out;
}

StepOutput DelayedOracle::step(const StepInput& input,
                               const DetectorState& state) const {
  StepOutput out;
  const std::vector<Detection> current =
      truths_as_detections(input.scenario->frames[input.frame]);
  for (int k = 1; k <= input.horizons; ++k) {
    out.forecasts[k] = current;
  }
  out.state = state;
  out.state.last_updated = input.frame;
  return out;
}

namespace {

struct Track {
  int id = 0;
  BoundingBox box;
  int category = 0;
  int last_frame = -1;
  int misses = 0;
};

struct CvTrackerState {
  std::vector<Track> tracks;
  int next_id = 0;
};

}  // namespace

ConstantVelocityForecaster::ConstantVelocityForecaster()
    : ConstantVelocityForecaster(Params{}) {}

StepOutput ConstantVelocityForecaster::step(const StepInput& input,
                                            const DetectorState& state) const {
  const FrameTruth& current = input.scenario->frames[input.frame];

  // The newest distinct support frame provides the motion baseline. A fully
  // clamped window (or N = 0) has none, and the output degenerates to the
  // current frame unshifted.
  int history_frame = -1;
  for (std::size_t i = 1; i < input.window.size(); ++i) {
    if (input.window[i] != input.frame) {
      history_frame = input.window[i];
      break;
    }
  }

  StepOutput out;
  std::vector<Detection> unshifted = truths_as_detections(current);
  if (history_frame < 0) {
    for (int k = 1; k <= input.horizons; ++k) out.forecasts[k] = unshifted;
  } else {
    const FrameTruth& past = input.scenario->frames[history_frame];
    const double gap = input.frame - history_frame;
    auto obj_box = [](const TruthObject& o) -> const BoundingBox& {
      return o.bbox;
    };
    auto obj_cat = [](const TruthObject& o) { return o.category; };
    const std::vector<int> match =
        greedy_associate(current.objects, past.objects, params_.association_iou,
                         obj_box, obj_cat, obj_box, obj_cat);
    for (int k = 1; k <= input.horizons; ++k) {
      std::vector<Detection> dets;
      dets.reserve(current.objects.size());
      for (std::size_t i = 0; i < current.objects.size(); ++i) {
        const TruthObject& obj = current.objects[i];
        if (match[i] < 0) {
          dets.push_back({obj.bbox, obj.category, 1.0});
          continue;
        }
        const BoundingBox& prev = past.objects[match[i]].bbox;
        const double vcx = (obj.bbox.center_x() - prev.center_x()) / gap;
        const double vcy = (obj.bbox.center_y() - prev.center_y()) / gap;
        const double vlw =
            (std::log(obj.bbox.width()) - std::log(prev.width())) / gap;
        const double vlh =
            (std::log(obj.bbox.height()) - std::log(prev.height())) / gap;
        const double cx = obj.bbox.center_x() + vcx * k;
        const double cy = obj.bbox.center_y() + vcy * k;
        const double w =
            vlw == 0.0 ? obj.bbox.width()
                       : std::exp(std::log(obj.bbox.width()) + vlw * k);
        const double h =
            vlh == 0.0 ? obj.bbox.height()
                       : std::exp(std::log(obj.bbox.height()) + vlh * k);
        dets.push_back({BoundingBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w,
                                    cy + 0.5 * h},
                        obj.category, 1.0});
      }
      out.forecasts[k] = std::move(dets);
    }
  }

  // Track bookkeeping: identity continuity plus a miss budget for objects
  // that temporarily disappear.
  CvTrackerState tracker;
  if (const auto* prev = std::any_cast<CvTrackerState>(&state.payload)) {
    tracker = *prev;
  }
  auto track_box = [](const Track& t) -> const BoundingBox& { return t.box; };
  auto track_cat = [](const Track& t) { return t.category; };
  auto obj_box = [](const TruthObject& o) -> const BoundingBox& {
    return o.bbox;
  };
  auto obj_cat = [](const TruthObject& o) { return o.category; };
  const std::vector<int> to_track =
      greedy_associate(current.objects, tracker.tracks,
                       params_.association_iou, obj_box, obj_cat, track_box,
                       track_cat);
  std::vector<bool> refreshed(tracker.tracks.size(), false);
  for (std::size_t i = 0; i < current.objects.size(); ++i) {
    if (to_track[i] >= 0) {
      Track& t = tracker.tracks[to_track[i]];
      t.box = current.objects[i].bbox;
      t.last_frame = input.frame;
      t.misses = 0;
      refreshed[to_track[i]] = true;
    } else {
      tracker.tracks.push_back({tracker.next_id++, current.objects[i].bbox,
                                current.objects[i].category, input.frame, 0});
    }
  }
  std::vector<Track> kept;
  for (std::size_t j = 0; j < tracker.tracks.size(); ++j) {
    Track t = tracker.tracks[j];
    if (j < refreshed.size() && !refreshed[j] && t.last_frame != input.frame) {
      if (++t.misses > params_.miss_budget) continue;
    }
    kept.push_back(t);
  }
  tracker.tracks = std::move(kept);

  out.state.last_updated = input.frame;
  out.state.payload = std::move(tracker);
  return out;
}

NoisyWrapper::NoisyWrapper(std::unique_ptr<DetectorModel> inner, Params params)
    : inner_(std::move(inner)), params_(params) {
  if (params_.drop_rate < 0.0 || params_.drop_rate > 1.0 ||
      params_.spurious_rate < 0.0 || params_.spurious_rate > 1.0 ||
      params_.jitter_std < 0.0 || params_.score_std < 0.0) {
    throw RangeError("NoisyWrapper: rates must be in [0,1], stds >= 0");
  }
}

void NoisyWrapper::init(const std::vector<CategoryInfo>& categories,
                        std::uint64_t seed) {
  categories_ = categories;
  seed_ = seed;
  inner_->init(categories, seed);
}

StepOutput NoisyWrapper::step(const StepInput& input,
                              const DetectorState& state) const {
  StepOutput out = inner_->step(input, state);
  for (auto& [k, dets] : out.forecasts) {
    Rng rng(substream_seed(seed_, "noisy/" + inner_->name(),
                           static_cast<std::uint64_t>(input.frame) * 131 +
                               static_cast<std::uint64_t>(k)));
    std::vector<Detection> noisy;
    noisy.reserve(dets.size());
    for (Detection det : dets) {
      if (params_.drop_rate > 0.0 && rng.next_unit() < params_.drop_rate) {
        continue;
      }
      if (params_.jitter_std > 0.0) {
        const double x0 = det.bbox.x_min + params_.jitter_std * rng.next_normal();
        const double y0 = det.bbox.y_min + params_.jitter_std * rng.next_normal();
        const double x1 = det.bbox.x_max + params_.jitter_std * rng.next_normal();
        const double y1 = det.bbox.y_max + params_.jitter_std * rng.next_normal();
        det.bbox = {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1),
                    std::max(y0, y1)};
      }
      if (params_.score_std > 0.0) {
        det.score = std::clamp(
            det.score + params_.score_std * rng.next_normal(), 0.0, 1.0);
      }
      noisy.push_back(det);
    }
    if (params_.spurious_rate > 0.0 && !categories_.empty() &&
        rng.next_unit() < params_.spurious_rate) {
      // Place a fake box inside the spatial extent of the current truths.
      const auto& objs = input.scenario->frames[input.frame].objects;
      if (!objs.empty()) {
        BoundingBox extent = objs.front().bbox;
        for (const auto& o : objs) {
          extent.x_min = std::min(extent.x_min, o.bbox.x_min);
          extent.y_min = std::min(extent.y_min, o.bbox.y_min);
          extent.x_max = std::max(extent.x_max, o.bbox.x_max);
          extent.y_max = std::max(extent.y_max, o.bbox.y_max);
        }
        const double side = rng.next_uniform(8.0, 64.0);
        const double cx = rng.next_uniform(extent.x_min, extent.x_max);
        const double cy = rng.next_uniform(extent.y_min, extent.y_max);
        const int cat =
            categories_[rng.next_u64() % categories_.size()].id;
        noisy.push_back({BoundingBox{cx - 0.5 * side, cy - 0.5 * side,
                                     cx + 0.5 * side, cy + 0.5 * side},
                         cat, rng.next_uniform(0.0, 0.5)});
      }
    }
    dets = std::move(noisy);
  }
  return out;
}

std::unique_ptr<DetectorModel> make_detector(const std::string& name) {
  if (name == "perfect") return std::make_unique<PerfectForecaster>();
  if (name == "delayed") return std::make_unique<DelayedOracle>();
  if (name == "const-velocity" || name == "cv") {
    return std::make_unique<ConstantVelocityForecaster>();
  }
  throw ConfigError("unknown detector '" + name +
                    "' (expected perfect, delayed or const-velocity)");
}

}  // namespace streambench
