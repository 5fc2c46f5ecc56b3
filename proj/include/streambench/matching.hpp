#pragma once

#include <map>
#include <optional>
#include <vector>

#include "streambench/types.hpp"

namespace streambench {

/// Outcome of one detection in one frame at one (threshold, category).
/// `ignored` marks detections absorbed by ignore-flagged truths (or, in
/// size-stratified evaluation, unmatched detections outside the stratum);
/// they are excluded from the precision-recall curve entirely.
struct MatchRecord {
  int detection_index = -1;
  std::optional<int> truth_index;
  double iou = 0.0;
  bool is_true_positive = false;
  bool ignored = false;
  double score = 0.0;
};

/// COCO-style per-frame matching: detections sorted by descending score
/// (ties keep input order), each claims the unmatched non-ignored truth
/// with the highest IoU >= threshold; failing that, an ignore-flagged truth
/// may absorb it. Returns one record per detection of `category`.
std::vector<MatchRecord> match_frame(const std::vector<Detection>& dets,
                                     const std::vector<TruthObject>& truths,
                                     double iou_threshold, int category);

/// 101-point interpolated average precision over pooled records.
/// Returns 0 when no truth is matched or recalled; NaN when the instance is
/// vacuous (no truths and no scoring detections).
double average_precision(const std::vector<MatchRecord>& records,
                         long n_truths);

/// A ground-truth frame paired with the detections under evaluation.
struct FramePair {
  std::vector<Detection> detections;
  std::vector<TruthObject> truths;
};

struct EvalOptions {
  std::vector<double> iou_thresholds;    // defaults to 0.50:0.05:0.95
  double small_area_max = 32.0 * 32.0;   // COCO strata, annotation pixels
  double medium_area_max = 96.0 * 96.0;
  std::optional<int> detections_cap;     // per-frame top-k by score; off by default

  static EvalOptions defaults();
};

/// Aggregated detection quality. NaN fields mean "not applicable" (for
/// example no ground truth in a size stratum).
struct APReport {
  double ap = 0.0;        // mean over IoU thresholds and categories
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ap_small = 0.0;
  double ap_medium = 0.0;
  double ap_large = 0.0;
  std::map<int, double> per_category;  // mean over thresholds
  long true_positives = 0;   // counted at IoU 0.50
  long false_positives = 0;
  long false_negatives = 0;
};

/// Matches every frame pair at every threshold and category, pools the
/// records, and reduces to an APReport. Categories without ground truth
/// anywhere in the input are excluded from the means.
APReport evaluate(const std::vector<FramePair>& frames,
                  const std::vector<CategoryInfo>& categories,
                  const EvalOptions& options = EvalOptions::defaults());

}  // namespace streambench
