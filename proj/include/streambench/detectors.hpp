#pragma once

#include <any>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "streambench/types.hpp"

namespace streambench {

/// Opaque per-detector buffer carried between simulator steps. The payload
/// is whatever the detector chooses to cache (tracks here; a trained
/// pipeline would cache neck features). Updated exactly once per processed
/// frame.
struct DetectorState {
  int last_updated = -1;
  std::any payload;
};

/// Horizon -> forecast detections for the frame that many periods ahead.
using Forecasts = std::map<int, std::vector<Detection>>;

/// What a detector sees when processing one frame: the support window
/// (current frame first, per make_window) and scenario geometry. Mock
/// detectors read ground-truth boxes, never pixels.
struct StepInput {
  const StreamScenario* scenario = nullptr;
  std::vector<int> window;  // [t, t - step, ...], clamped at 0
  int frame = 0;            // == window.front()
  int horizons = 1;         // forecasts requested for k = 1..horizons
  WindowSpec window_spec;
};

struct StepOutput {
  Forecasts forecasts;
  DetectorState state;
};

/// Pluggable detector/forecaster contract. step must be a pure function of
/// (input, state): equal inputs produce equal outputs, and the scenario is
/// never mutated.
class DetectorModel {
 public:
  virtual ~DetectorModel() = default;
  virtual void init(const std::vector<CategoryInfo>& categories,
                    std::uint64_t seed) = 0;
  virtual StepOutput step(const StepInput& input,
                          const DetectorState& state) const = 0;
  virtual std::string name() const = 0;
};

/// Oracle forecaster: emits the exact ground truth of frames t+1..t+K.
/// Horizons beyond the sequence end produce empty forecasts.
class PerfectForecaster : public DetectorModel {
 public:
  void init(const std::vector<CategoryInfo>&, std::uint64_t) override {}
  StepOutput step(const StepInput& input,
                  const DetectorState& state) const override;
  std::string name() const override { return "perfect"; }
};

/// Zero-forecasting baseline: replicates the current frame's truth for
/// every horizon. Models a detector that ignores latency entirely.
class DelayedOracle : public DetectorModel {
 public:
  void init(const std::vector<CategoryInfo>&, std::uint64_t) override {}
  StepOutput step(const StepInput& input,
                  const DetectorState& state) const override;
  std::string name() const override { return "delayed"; }
};

/// Linear extrapolation per tracked object. Velocity of center and
/// log-size comes from the two newest distinct window frames (t and
/// t - step); with no history (N = 0 or a fully clamped window) the output
/// degenerates exactly to DelayedOracle. State holds greedy-IoU tracks for
/// identity bookkeeping; stale tracks are dropped after miss_budget frames.
class ConstantVelocityForecaster : public DetectorModel {
 public:
  struct Params {
    double association_iou = 0.3;
    int miss_budget = 3;
  };

  ConstantVelocityForecaster();
  explicit ConstantVelocityForecaster(Params params) : params_(params) {}
  void init(const std::vector<CategoryInfo>&, std::uint64_t) override {}
  StepOutput step(const StepInput& input,
                  const DetectorState& state) const override;
  std::string name() const override { return "const-velocity"; }

 private:
  Params params_;
};

/// Wraps another detector with seeded box jitter, score perturbation and
/// drop/spurious rates, so sAP curves take mid-range values instead of 0/1.
/// Deterministic: noise is drawn from a substream named by the wrapper and
/// salted with the processed frame index.
class NoisyWrapper : public DetectorModel {
 public:
  struct Params {
    double jitter_std = 0.0;     // pixels, on every box corner
    double score_std = 0.0;      // score perturbation, clamped to [0, 1]
    double drop_rate = 0.0;      // probability a forecast box is dropped
    double spurious_rate = 0.0;  // expected spurious boxes per forecast
  };

  NoisyWrapper(std::unique_ptr<DetectorModel> inner, Params params);
  void init(const std::vector<CategoryInfo>& categories,
            std::uint64_t seed) override;
  StepOutput step(const StepInput& input,
                  const DetectorState& state) const override;
  std::string name() const override { return "noisy-" + inner_->name(); }

 private:
  std::unique_ptr<DetectorModel> inner_;
  Params params_;
  std::uint64_t seed_ = 0;
  std::vector<CategoryInfo> categories_;
};

/// Builds a detector by name: "perfect", "delayed" or "const-velocity".
std::unique_ptr<DetectorModel> make_detector(const std::string& name);

}  // namespace streambench
