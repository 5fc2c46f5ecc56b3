#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streambench {

struct SelfCheckResult {
  std::string property;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Kernel equivalence and gradient suites: deformable-vs-standard
/// convolution, re-parameterized fusion, pyramid level shapes, geometry
/// fixtures, and the distillation gradient checks. `tolerance_scale`
/// multiplies every tolerance (0 makes approximate checks impossible, for
/// negative-testing the harness itself).
std::vector<SelfCheckResult> run_selfcheck(std::uint64_t seed = 0,
                                           double tolerance_scale = 1.0);

}  // namespace streambench
