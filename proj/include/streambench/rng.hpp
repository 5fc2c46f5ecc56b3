#pragma once

#include <cstdint>
#include <string_view>

namespace streambench {

/// Small deterministic generator (splitmix64). Every random draw in the
/// engine flows from one root seed through named substreams, so adding a
/// consumer never perturbs another's stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  /// Standard normal via Box-Muller (platform-independent, unlike
  /// std::normal_distribution).
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a fold of a substream name into a seed.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name);

/// Substream additionally salted with an index (e.g. a frame number).
std::uint64_t substream_seed(std::uint64_t root, std::string_view name,
                             std::uint64_t index);

}  // namespace streambench
