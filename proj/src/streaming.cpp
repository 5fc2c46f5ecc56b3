#include "streambench/streaming.hpp"

#include <algorithm>

namespace streambench {

StreamMode parse_stream_mode(const std::string& name) {
  if (name == "real_time") return StreamMode::kRealTime;
  if (name == "non_real_time") return StreamMode::kNonRealTime;
  throw ConfigError("unknown stream mode '" + name +
                    "' (expected real_time or non_real_time)");
}

std::string to_string(StreamMode mode) {
  return mode == StreamMode::kRealTime ? "real_time" : "non_real_time";
}

std::vector<FramePair> associate(const ResultTimeline& timeline,
                                 const StreamScenario& scenario, int k,
                                 const StreamPolicy& policy) {
  if (k < 1 || k > policy.horizon) {
    throw RangeError("associate: k=" + std::to_string(k) +
                     " outside policy horizon 1.." +
                     std::to_string(policy.horizon));
  }
  if (policy.warmup_frames < 0) {
    throw RangeError("associate: warmup_frames must be >= 0");
  }

  // Candidates for this horizon, in timeline (emit_time) order.
  std::vector<const EmittedResult*> candidates;
  for (const EmittedResult& r : timeline.results) {
    if (r.horizon == k) candidates.push_back(&r);
  }

  std::vector<FramePair> pairs;
  const int first = k + policy.warmup_frames;
  for (int t = first; t < scenario.frame_count(); ++t) {
    const double tau = scenario.frames[t].timestamp;
    const EmittedResult* chosen = nullptr;
    for (const EmittedResult* r : candidates) {
      if (r->emit_time > tau) break;  // timeline sorted by emit_time
      if (policy.mode == StreamMode::kRealTime && r->source_frame + k != t) {
        continue;
      }
      // Latest emit_time wins; ties go to the larger source_frame.
      if (!chosen || r->emit_time > chosen->emit_time ||
          (r->emit_time == chosen->emit_time &&
           r->source_frame > chosen->source_frame)) {
        chosen = r;
      }
    }
    FramePair pair;
    pair.truths = scenario.frames[t].objects;
    if (chosen) pair.detections = chosen->detections;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

KStepReport streaming_ap(const ResultTimeline& timeline,
                         const StreamScenario& scenario,
                         const StreamPolicy& policy,
                         const EvalOptions& options) {
  return streaming_ap_pooled({{&timeline, &scenario}}, policy, options);
}

KStepReport streaming_ap_pooled(
    const std::vector<std::pair<const ResultTimeline*, const StreamScenario*>>&
        sequences,
    const StreamPolicy& policy, const EvalOptions& options) {
  if (policy.horizon < 1) {
    throw RangeError("streaming_ap: policy horizon must be >= 1");
  }
  KStepReport report;
  report.max_k = policy.horizon;
  for (int k = 1; k <= policy.horizon; ++k) {
    std::vector<FramePair> pooled;
    std::vector<CategoryInfo> categories;
    for (const auto& [timeline, scenario] : sequences) {
      auto pairs = associate(*timeline, *scenario, k, policy);
      report.per_sequence[scenario->sequence_id][k] =
          evaluate(pairs, scenario->categories, options);
      pooled.insert(pooled.end(), std::make_move_iterator(pairs.begin()),
                    std::make_move_iterator(pairs.end()));
      for (const CategoryInfo& c : scenario->categories) {
        const bool seen =
            std::any_of(categories.begin(), categories.end(),
                        [&](const CategoryInfo& d) { return d.id == c.id; });
        if (!seen) categories.push_back(c);
      }
    }
    if (sequences.size() == 1) {
      report.aggregate[k] =
          report.per_sequence[sequences.front().second->sequence_id][k];
    } else {
      report.aggregate[k] = evaluate(pooled, categories, options);
    }
  }
  return report;
}

}  // namespace streambench
