#pragma once

#include <cstdint>
#include <vector>

#include "streambench/detectors.hpp"
#include "streambench/streaming.hpp"
#include "streambench/types.hpp"

namespace streambench {

enum class LatencyKind { kConstant, kGaussianClamped, kTrace };

LatencyKind parse_latency_kind(const std::string& name);
std::string to_string(LatencyKind kind);

/// Per-frame processing latency. Sampled values are always > 0; Gaussian
/// draws are clamped at `floor`. Latency is simulated, never measured —
/// the engine evaluates metric and pipeline semantics, not model speed.
struct LatencyModel {
  LatencyKind kind = LatencyKind::kConstant;
  double mean = 0.0;               // seconds
  double std_dev = 0.0;            // gaussian_clamped only
  double floor = 1e-4;             // lower clamp, > 0
  std::vector<double> trace;       // kTrace: cycled per processed frame
  std::uint64_t seed_salt = 0;     // extra salt for the latency substream
};

struct SimConfig {
  StreamPolicy policy;
  WindowSpec window;
  LatencyModel latency;
  std::uint64_t seed = 0;

  /// Throws ConfigError on inconsistent settings (e.g. real-time mode with
  /// a constant latency >= frame_period).
  void validate(double frame_period) const;
};

struct SimStats {
  int processed_frames = 0;
  int skipped_frames = 0;
  std::vector<int> deadline_misses;  // frames whose completion slipped past
                                     // the next arrival (real-time mode)
};

struct SimRun {
  ResultTimeline timeline;
  SimStats stats;
};

/// Deterministic event loop over frame arrivals: each processed frame runs
/// the detector on its support window and buffer state, emits forecasts for
/// horizons 1..K time-stamped at arrival + sampled latency, and updates the
/// buffer exactly once. In non-real-time mode arrivals during processing
/// are skipped and the next arrival is processed; in real-time mode every
/// frame is processed and deadline misses are recorded, with the late
/// result emitted anyway.
SimRun run(const StreamScenario& scenario, DetectorModel& detector,
           const SimConfig& config);

/// One full simulation per (n_support, step) grid cell.
struct SweepCell {
  WindowSpec window;
  KStepReport report;
};

std::vector<SweepCell> sweep_window(
    const StreamScenario& scenario, DetectorModel& detector,
    const SimConfig& config, const std::vector<WindowSpec>& grid,
    const EvalOptions& options = EvalOptions::defaults());

}  // namespace streambench
