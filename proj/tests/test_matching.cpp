#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "streambench/geometry.hpp"
#include "streambench/matching.hpp"
#include "streambench/rng.hpp"

using namespace streambench;

namespace {

TruthObject truth_at(double x, double y, double side, int category = 0,
                     bool ignore = false) {
  const BoundingBox box{x, y, x + side, y + side};
  return {box, category, box.area(), ignore};
}

Detection det_at(double x, double y, double side, double score,
                 int category = 0) {
  return {{x, y, x + side, y + side}, category, score};
}

}  // namespace

TEST_CASE("match_frame basics") {
  const std::vector<TruthObject> truths = {truth_at(0, 0, 10)};

  SUBCASE("exact hit is a true positive") {
    const auto records = match_frame({det_at(0, 0, 10, 0.9)}, truths, 0.5, 0);
    REQUIRE(records.size() == 1);
    CHECK(records[0].is_true_positive);
    CHECK(records[0].truth_index == 0);
    CHECK(records[0].iou == 1.0);
  }

  SUBCASE("no detections leaves the truth unmatched with no records") {
    CHECK(match_frame({}, truths, 0.5, 0).empty());
  }

  SUBCASE("second detection on a claimed truth becomes a false positive") {
    // frozen from the brute-force assignment oracle: the 0.9-scored exact
    // box takes the truth, the 0.8-scored IoU-0.6 box is left over
    const std::vector<Detection> dets = {det_at(0, 0, 10, 0.9),
                                         det_at(0, 2.5, 10, 0.8)};
    REQUIRE(iou(dets[1].bbox, truths[0].bbox) == doctest::Approx(0.6).epsilon(1e-12));
    const auto records = match_frame(dets, truths, 0.5, 0);
    REQUIRE(records.size() == 2);
    CHECK(records[0].detection_index == 0);
    CHECK(records[0].is_true_positive);
    CHECK(!records[1].is_true_positive);
    CHECK(!records[1].ignored);
  }

  SUBCASE("threshold must be in (0, 1]") {
    CHECK_THROWS_AS(match_frame({}, truths, 0.0, 0), RangeError);
    CHECK_THROWS_AS(match_frame({}, truths, 1.5, 0), RangeError);
  }
}

TEST_CASE("ignore-flagged truths absorb matches") {
  const std::vector<TruthObject> truths = {truth_at(0, 0, 10, 0, true),
                                           truth_at(100, 100, 10, 0, false)};
  const std::vector<Detection> dets = {det_at(0, 0, 10, 0.9),
                                       det_at(1, 1, 10, 0.8),
                                       det_at(100, 100, 10, 0.7)};
  const auto records = match_frame(dets, truths, 0.5, 0);
  REQUIRE(records.size() == 3);
  CHECK(records[0].ignored);        // absorbed, not a TP
  CHECK(records[1].ignored);        // ignored truths absorb repeatedly
  CHECK(records[2].is_true_positive);
}

TEST_CASE("detections prefer a matchable real truth over an ignored one") {
  const std::vector<TruthObject> truths = {truth_at(0, 0, 10, 0, true),
                                           truth_at(2, 0, 10, 0, false)};
  const std::vector<Detection> dets = {det_at(1, 0, 10, 0.9)};
  const auto records = match_frame(dets, truths, 0.5, 0);
  REQUIRE(records.size() == 1);
  CHECK(records[0].is_true_positive);
  CHECK(records[0].truth_index == 1);
}

TEST_CASE("average_precision fixtures") {
  SUBCASE("all truths matched by clean detections") {
    std::vector<MatchRecord> records(3);
    for (int i = 0; i < 3; ++i) {
      records[i].is_true_positive = true;
      records[i].score = 0.9 - 0.1 * i;
    }
    CHECK(average_precision(records, 3) == 1.0);
  }

  SUBCASE("no detections scores zero") {
    CHECK(average_precision({}, 4) == 0.0);
  }

  SUBCASE("one TP then one FP over two truths") {
    MatchRecord tp;
    tp.is_true_positive = true;
    tp.score = 0.9;
    MatchRecord fp;
    fp.score = 0.8;
    // brute-force PR oracle on this instance: 51 recall points at
    // precision 1, the rest unreachable
    CHECK(average_precision({tp, fp}, 2) ==
          doctest::Approx(51.0 / 101.0).epsilon(1e-12));
    CHECK(average_precision({tp, fp}, 2) ==
          doctest::Approx(oracles::pr_curve_ap({{0.9, true}, {0.8, false}}, 2))
              .epsilon(1e-12));
  }

  SUBCASE("zero truths with any detection is zero; vacuous is NaN") {
    MatchRecord fp;
    fp.score = 0.5;
    CHECK(average_precision({fp}, 0) == 0.0);
    CHECK(std::isnan(average_precision({}, 0)));
  }
}

TEST_CASE("average_precision equals the exhaustive PR oracle") {
  // every TP/FP pattern for up to 8 detections and up to 4 truths
  for (int n_det = 0; n_det <= 8; ++n_det) {
    for (long n_truth = 0; n_truth <= 4; ++n_truth) {
      for (int pattern = 0; pattern < (1 << n_det); ++pattern) {
        const int tp_count = __builtin_popcount(pattern);
        if (tp_count > n_truth) continue;
        std::vector<MatchRecord> records;
        std::vector<oracles::ScoredOutcome> outcomes;
        for (int i = 0; i < n_det; ++i) {
          MatchRecord r;
          r.score = 1.0 - 0.05 * i;
          r.is_true_positive = (pattern >> i) & 1;
          records.push_back(r);
          outcomes.push_back({r.score, r.is_true_positive});
        }
        if (n_truth == 0 && n_det == 0) continue;  // vacuous
        const double got = average_precision(records, n_truth);
        const double want = oracles::pr_curve_ap(outcomes, n_truth);
        REQUIRE(got == doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("AP depends only on score ranks") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MatchRecord> records;
    for (int i = 0; i < 10; ++i) {
      MatchRecord r;
      r.score = rng.next_unit();
      r.is_true_positive = rng.next_unit() < 0.5;
      records.push_back(r);
    }
    const double base = average_precision(records, 6);
    for (MatchRecord& r : records) {
      r.score = std::tanh(3.0 * r.score);  // strictly monotone rescale
    }
    CHECK(average_precision(records, 6) == base);
  }
}

TEST_CASE("adding a lowest-scored FP never increases AP") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MatchRecord> records;
    double min_score = 1.0;
    for (int i = 0; i < 8; ++i) {
      MatchRecord r;
      r.score = 0.2 + 0.8 * rng.next_unit();
      r.is_true_positive = rng.next_unit() < 0.6;
      min_score = std::min(min_score, r.score);
      records.push_back(r);
    }
    const double base = average_precision(records, 5);
    MatchRecord fp;
    fp.score = min_score / 2;
    records.push_back(fp);
    CHECK(average_precision(records, 5) <= base + 1e-12);
  }
}

TEST_CASE("evaluate end to end") {
  const std::vector<CategoryInfo> cats = {{0, "car"}, {1, "person"}};

  SUBCASE("perfect detections score 1.0 everywhere applicable") {
    std::vector<FramePair> frames(3);
    for (auto& frame : frames) {
      frame.truths = {truth_at(0, 0, 20, 0), truth_at(50, 50, 40, 1)};
      frame.detections = {det_at(0, 0, 20, 0.9, 0),
                          det_at(50, 50, 40, 0.9, 1)};
    }
    const APReport report = evaluate(frames, cats);
    CHECK(report.ap == 1.0);
    CHECK(report.ap50 == 1.0);
    CHECK(report.ap75 == 1.0);
    CHECK(report.true_positives == 6);
    CHECK(report.false_positives == 0);
    CHECK(report.false_negatives == 0);
    CHECK(report.per_category.at(0) == 1.0);
    CHECK(report.per_category.at(1) == 1.0);
    CHECK(report.ap_small == 1.0);   // the 20px box (400 px^2)
    CHECK(report.ap_medium == 1.0);  // the 40px box (1600 px^2)
    CHECK(std::isnan(report.ap_large));  // nothing >= 96^2
  }

  SUBCASE("IoU 0.6 shift passes at 0.5 and fails at 0.75") {
    std::vector<FramePair> frames(2);
    for (auto& frame : frames) {
      frame.truths = {truth_at(0, 0, 10, 0)};
      frame.detections = {det_at(0, 2.5, 10, 0.9, 0)};  // IoU 0.6
    }
    const APReport report = evaluate(frames, {{0, "car"}});
    CHECK(report.ap50 == 1.0);
    CHECK(report.ap75 == 0.0);
    // thresholds .5, .55, .6 pass => mean 0.3
    CHECK(report.ap == doctest::Approx(0.3).epsilon(1e-12));
  }

  SUBCASE("empty input reports not-applicable sentinels") {
    const APReport report = evaluate({}, cats);
    CHECK(std::isnan(report.ap));
    CHECK(std::isnan(report.ap50));
    CHECK(std::isnan(report.ap_large));
    CHECK(report.true_positives == 0);
  }

  SUBCASE("categories with zero ground truth are excluded from the mean") {
    std::vector<FramePair> frames(1);
    frames[0].truths = {truth_at(0, 0, 20, 0)};
    frames[0].detections = {det_at(0, 0, 20, 0.9, 0),
                            det_at(50, 50, 20, 0.8, 1)};  // stray category 1
    const APReport report = evaluate(frames, cats);
    CHECK(report.ap == 1.0);  // category 1 has no truths anywhere
    CHECK(report.per_category.count(1) == 0);
  }

  SUBCASE("size strata use annotation areas") {
    std::vector<FramePair> frames(1);
    frames[0].truths = {truth_at(0, 0, 10, 0),     // 100 px^2: small
                        truth_at(100, 0, 50, 0),   // 2500 px^2: medium
                        truth_at(300, 0, 100, 0)}; // 10000 px^2: large
    frames[0].detections = {det_at(0, 0, 10, 0.9, 0),
                            det_at(100, 0, 50, 0.8, 0),
                            det_at(300, 0, 100, 0.7, 0)};
    const APReport report = evaluate(frames, {{0, "car"}});
    CHECK(report.ap_small == 1.0);
    CHECK(report.ap_medium == 1.0);
    CHECK(report.ap_large == 1.0);
    CHECK(report.ap == 1.0);
  }
}

TEST_CASE("evaluate on a single frame equals the brute-force PR oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    FramePair frame;
    const int n_truth = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int g = 0; g < n_truth; ++g) {
      frame.truths.push_back(truth_at(g * 40.0, 0, 20, 0));
    }
    const int n_det = static_cast<int>(rng.next_u64() % 8);
    for (int d = 0; d < n_det; ++d) {
      // either near a truth or far away
      const int target = static_cast<int>(rng.next_u64() % n_truth);
      const double off = rng.next_unit() < 0.5 ? rng.next_uniform(0, 6)
                                               : rng.next_uniform(30, 60);
      frame.detections.push_back(
          det_at(target * 40.0 + off, 0, 20, rng.next_unit(), 0));
    }
    EvalOptions options;
    options.iou_thresholds = {0.5};
    const APReport report = evaluate({frame}, {{0, "car"}}, options);

    const auto records = match_frame(frame.detections, frame.truths, 0.5, 0);
    std::vector<oracles::ScoredOutcome> outcomes;
    for (const MatchRecord& r : records) {
      if (!r.ignored) outcomes.push_back({r.score, r.is_true_positive});
    }
    const double want = oracles::pr_curve_ap(outcomes, n_truth);
    if (n_det == 0) {
      CHECK(report.ap == 0.0);
    } else {
      CHECK(report.ap == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-frame detection cap keeps the top-scored boxes") {
  FramePair frame;
  frame.truths = {truth_at(0, 0, 10, 0)};
  frame.detections = {det_at(200, 0, 10, 0.9, 0), det_at(0, 0, 10, 0.5, 0)};
  EvalOptions options = EvalOptions::defaults();
  options.detections_cap = 1;
  const APReport capped = evaluate({frame}, {{0, "car"}}, options);
  CHECK(capped.ap == 0.0);  // only the misplaced high-score box survives
  const APReport full = evaluate({frame}, {{0, "car"}});
  CHECK(full.ap > 0.0);
}
