#include "streambench/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "streambench/geometry.hpp"

namespace streambench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> score_order(const std::vector<Detection>& dets,
                             int category) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(dets.size()); ++i) {
    if (dets[i].category == category) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

double safe_iou(const BoundingBox& a, const BoundingBox& b) {
  if (a.area() <= 0.0 && b.area() <= 0.0) return 0.0;
  return iou(a, b);
}

}  // namespace

std::vector<MatchRecord> match_frame(const std::vector<Detection>& dets,
                                     const std::vector<TruthObject>& truths,
                                     double iou_threshold, int category) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw RangeError("match_frame: iou_threshold must be in (0, 1]");
  }
  const std::vector<int> order = score_order(dets, category);

  std::vector<bool> truth_taken(truths.size(), false);
  std::vector<MatchRecord> records;
  records.reserve(order.size());

  for (int det_idx : order) {
    const Detection& det = dets[det_idx];
    int best_truth = -1;
    double best_iou = 0.0;
    bool best_ignored = false;
    for (int g = 0; g < static_cast<int>(truths.size()); ++g) {
      const TruthObject& truth = truths[g];
      if (truth.category != category) continue;
      // Ignore-flagged truths absorb any number of detections; regular
      // truths are claimed once. A non-ignored match is never traded for
      // an ignored one.
      if (!truth.ignore && truth_taken[g]) continue;
      if (truth.ignore && best_truth >= 0 && !best_ignored) continue;
      const double v = safe_iou(det.bbox, truth.bbox);
      if (v < iou_threshold) continue;
      if (best_truth < 0 || v > best_iou ||
          (best_ignored && !truth.ignore)) {
        best_truth = g;
        best_iou = v;
        best_ignored = truth.ignore;
      }
    }
    MatchRecord rec;
    rec.detection_index = det_idx;
    rec.score = det.score;
    if (best_truth >= 0) {
      rec.truth_index = best_truth;
      rec.iou = best_iou;
      if (best_ignored) {
        rec.ignored = true;
      } else {
        rec.is_true_positive = true;
        truth_taken[best_truth] = true;
      }
    }
    records.push_back(rec);
  }
  return records;
}

double average_precision(const std::vector<MatchRecord>& records,
                         long n_truths) {
  if (n_truths < 0) {
    throw RangeError("average_precision: n_truths must be >= 0");
  }
  std::vector<int> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return records[a].score > records[b].score;
  });

  std::vector<double> precision;
  std::vector<double> recall;
  long tp = 0, fp = 0;
  for (int idx : order) {
    const MatchRecord& r = records[idx];
    if (r.ignored) continue;
    if (r.is_true_positive) {
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) /
                        static_cast<double>(tp + fp));
    recall.push_back(n_truths > 0
                         ? static_cast<double>(tp) /
                               static_cast<double>(n_truths)
                         : 0.0);
  }

  if (n_truths == 0) {
    // No ground truth: any scoring detection is a false positive.
    return precision.empty() ? kNaN : 0.0;
  }
  if (precision.empty()) return 0.0;

  // Precision envelope from the right, then sample at 101 recall points.
  for (int i = static_cast<int>(precision.size()) - 2; i >= 0; --i) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double total = 0.0;
  const int points = 101;
  std::size_t cursor = 0;
  for (int j = 0; j < points; ++j) {
    const double r = static_cast<double>(j) / (points - 1);
    while (cursor < recall.size() && recall[cursor] < r) ++cursor;
    if (cursor < recall.size()) total += precision[cursor];
  }
  return total / points;
}

EvalOptions EvalOptions::defaults() {
  EvalOptions o;
  for (int i = 0; i < 10; ++i) o.iou_thresholds.push_back(0.5 + 0.05 * i);
  return o;
}

namespace {

struct Stratum {
  double area_min;
  double area_max;
};

// Pools match records for one (category, threshold, stratum) and counts the
// non-ignored truths in the stratum. Out-of-stratum truths are re-flagged
// as ignore so they absorb matches; unmatched detections whose own area is
// out of stratum are dropped from the curve (COCO convention).
struct PooledResult {
  std::vector<MatchRecord> records;
  long n_truths = 0;
};

PooledResult pool_records(const std::vector<FramePair>& frames, int category,
                          double threshold, const Stratum& stratum,
                          const EvalOptions& options) {
  PooledResult out;
  for (const FramePair& frame : frames) {
    std::vector<TruthObject> truths = frame.truths;
    for (TruthObject& t : truths) {
      if (t.area < stratum.area_min || t.area >= stratum.area_max) {
        t.ignore = true;
      }
    }
    const std::vector<Detection>* dets = &frame.detections;
    std::vector<Detection> capped;
    if (options.detections_cap &&
        static_cast<int>(frame.detections.size()) > *options.detections_cap) {
      std::vector<int> order(frame.detections.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return frame.detections[a].score > frame.detections[b].score;
      });
      order.resize(*options.detections_cap);
      std::sort(order.begin(), order.end());
      for (int i : order) capped.push_back(frame.detections[i]);
      dets = &capped;
    }
    auto records = match_frame(*dets, truths, threshold, category);
    for (MatchRecord& r : records) {
      const double det_area = (*dets)[r.detection_index].bbox.area();
      if (!r.is_true_positive && !r.truth_index &&
          (det_area < stratum.area_min || det_area >= stratum.area_max)) {
        r.ignored = true;
      }
      out.records.push_back(r);
    }
    for (const TruthObject& t : truths) {
      if (t.category == category && !t.ignore) ++out.n_truths;
    }
  }
  return out;
}

double mean_or_nan(const std::vector<double>& values) {
  double total = 0.0;
  long count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    total += v;
    ++count;
  }
  return count == 0 ? kNaN : total / count;
}

}  // namespace

APReport evaluate(const std::vector<FramePair>& frames,
                  const std::vector<CategoryInfo>& categories,
                  const EvalOptions& options) {
  const double inf = std::numeric_limits<double>::infinity();
  const Stratum all{0.0, inf};
  const Stratum small{0.0, options.small_area_max};
  const Stratum medium{options.small_area_max, options.medium_area_max};
  const Stratum large{options.medium_area_max, inf};

  // Categories with zero ground truth across the input are excluded.
  std::set<int> active;
  for (const FramePair& frame : frames) {
    for (const TruthObject& t : frame.truths) {
      if (!t.ignore) active.insert(t.category);
    }
  }
  if (!categories.empty()) {
    std::set<int> declared;
    for (const auto& c : categories) declared.insert(c.id);
    std::set<int> kept;
    std::set_intersection(active.begin(), active.end(), declared.begin(),
                          declared.end(), std::inserter(kept, kept.begin()));
    active.swap(kept);
  }

  APReport report;
  report.ap = report.ap50 = report.ap75 = kNaN;
  report.ap_small = report.ap_medium = report.ap_large = kNaN;
  if (active.empty()) return report;

  std::vector<double> ap_all, ap50, ap75, ap_s, ap_m, ap_l;
  for (int category : active) {
    std::vector<double> per_threshold;
    for (double threshold : options.iou_thresholds) {
      const PooledResult pooled =
          pool_records(frames, category, threshold, all, options);
      per_threshold.push_back(
          average_precision(pooled.records, pooled.n_truths));
      const PooledResult ps =
          pool_records(frames, category, threshold, small, options);
      ap_s.push_back(average_precision(ps.records, ps.n_truths));
      const PooledResult pm =
          pool_records(frames, category, threshold, medium, options);
      ap_m.push_back(average_precision(pm.records, pm.n_truths));
      const PooledResult pl =
          pool_records(frames, category, threshold, large, options);
      ap_l.push_back(average_precision(pl.records, pl.n_truths));
      if (threshold == options.iou_thresholds.front()) {
        for (const MatchRecord& r : pooled.records) {
          if (r.ignored) continue;
          if (r.is_true_positive) {
            ++report.true_positives;
          } else {
            ++report.false_positives;
          }
        }
        report.false_negatives +=
            pooled.n_truths -
            std::count_if(pooled.records.begin(), pooled.records.end(),
                          [](const MatchRecord& r) {
                            return r.is_true_positive;
                          });
      }
    }
    report.per_category[category] = mean_or_nan(per_threshold);
    ap_all.insert(ap_all.end(), per_threshold.begin(), per_threshold.end());
    for (std::size_t i = 0; i < options.iou_thresholds.size(); ++i) {
      const double t = options.iou_thresholds[i];
      if (t == 0.5) ap50.push_back(per_threshold[i]);
      if (t == 0.75) ap75.push_back(per_threshold[i]);
    }
  }
  report.ap = mean_or_nan(ap_all);
  report.ap50 = mean_or_nan(ap50);
  report.ap75 = mean_or_nan(ap75);
  report.ap_small = mean_or_nan(ap_s);
  report.ap_medium = mean_or_nan(ap_m);
  report.ap_large = mean_or_nan(ap_l);
  return report;
}

}  // namespace streambench
