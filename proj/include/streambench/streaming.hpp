#pragma once

#include <map>
#include <string>
#include <vector>

#include "streambench/matching.hpp"
#include "streambench/types.hpp"

namespace streambench {

enum class StreamMode {
  kRealTime,     // per-frame processing finishes before the next arrival
  kNonRealTime,  // slower pipelines; frames may be skipped while busy
};

StreamMode parse_stream_mode(const std::string& name);
std::string to_string(StreamMode mode);

/// Evaluation policy. `warmup_frames` excludes the leading frames of a
/// sequence where a bounded-history forecaster has not yet seen a full
/// support window; frames before the first reachable k-step target are
/// always excluded (no pipeline can produce a forecast for them).
struct StreamPolicy {
  StreamMode mode = StreamMode::kRealTime;
  int horizon = 1;       // K >= 1
  int warmup_frames = 0;
};

/// sAP_k tables for k = 1..K, aggregate plus per-sequence.
struct KStepReport {
  int max_k = 0;
  std::map<int, APReport> aggregate;
  std::map<std::string, std::map<int, APReport>> per_sequence;
};

/// Latency-aware pairing of emitted results to ground-truth frames for one
/// step horizon k.
///
/// A ground-truth frame at time tau is paired with:
///   - real-time mode: the last horizon-k result with emit_time <= tau whose
///     source_frame + k targets that frame;
///   - non-real-time mode: the last horizon-k result with emit_time <= tau
///     regardless of source (latest emit_time wins, ties by larger source).
/// Results emitted exactly at tau count as available. Frames with no
/// available result pair against an empty detection list. Frames with
/// index < k + warmup are excluded from the pairing.
std::vector<FramePair> associate(const ResultTimeline& timeline,
                                 const StreamScenario& scenario, int k,
                                 const StreamPolicy& policy);

/// Runs associate + evaluate for every k in 1..policy.horizon.
KStepReport streaming_ap(const ResultTimeline& timeline,
                         const StreamScenario& scenario,
                         const StreamPolicy& policy,
                         const EvalOptions& options = EvalOptions::defaults());

/// Pools match inputs from several sequences (concatenated frame pairs)
/// before computing AP, and also reports each sequence individually.
KStepReport streaming_ap_pooled(
    const std::vector<std::pair<const ResultTimeline*, const StreamScenario*>>&
        sequences,
    const StreamPolicy& policy,
    const EvalOptions& options = EvalOptions::defaults());

}  // namespace streambench
