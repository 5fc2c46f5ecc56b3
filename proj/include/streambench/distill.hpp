#pragma once

#include <vector>

#include "streambench/geometry.hpp"
#include "streambench/tensor.hpp"
#include "streambench/types.hpp"

namespace streambench {

/// Per-level detection-head logits: classification (n, C, h, w),
/// objectness (n, 1, h, w) and box regression (n, 4, h, w) where the four
/// regression channels are (dx, dy, log w, log h) in stride units.
struct LogitsLevel {
  int stride = 8;
  Tensor4 cls;
  Tensor4 obj;
  Tensor4 reg;
};

struct LogitsBundle {
  std::vector<LogitsLevel> levels;

  void check() const;  // throws ShapeError on inconsistent shapes
  bool same_shape(const LogitsBundle& other) const;
  int num_classes() const;
  int batch() const;
};

/// Size logits above this magnitude would overflow exp into useless boxes.
inline constexpr double kSizeLogitCap = 60.0;

/// Anchor-free grid decode: center = (grid + offset) * stride,
/// size = exp(size logit) * stride, returned in corner form.
BoundingBox decode_reg(const Tensor4& reg, int n, int grid_y, int grid_x,
                       int stride);

/// Decoded box plus the per-class scores used by assignment cost.
struct AssignTruth {
  BoundingBox bbox;
  int category = 0;
};

struct OtaParams {
  double center_radius = 2.5;  // strides around a truth center
  double cost_iou_weight = 3.0;
  int top_candidates = 10;     // dynamic-k estimation pool
};

/// Positive positions per level, -1 when unassigned, otherwise the index
/// of the owning truth.
struct PositiveSet {
  std::vector<std::vector<int>> assigned;  // [level][y * w + x]

  std::size_t count() const;
  bool empty() const { return count() == 0; }
};

/// Simplified OTA assignment: candidate positions have their grid center
/// inside a truth box or within center_radius strides of its center; the
/// per-candidate cost is a class-probability squared error plus a weighted
/// (1 - IoU); each truth takes its dynamic-k lowest-cost candidates, and a
/// position claimed twice goes to the lower cost. A truth left with no
/// candidate falls back to the nearest grid center. Requires batch == 1.
PositiveSet ota_assign(const LogitsBundle& bundle,
                       const std::vector<AssignTruth>& truths,
                       const OtaParams& params = {});

struct AkdmLoss {
  double total = 0.0;
  double cls = 0.0;
  double obj = 0.0;
  double reg = 0.0;
  bool empty_positives = false;  // reg term skipped, see total
};

/// Distillation loss between forecast logits and future-frame teacher
/// logits: mean squared error on cls and obj over every position, GIoU
/// loss on decoded boxes over positive positions only.
AkdmLoss akdm_loss(const LogitsBundle& student, const LogitsBundle& teacher,
                   const PositiveSet& positives);

struct GradCheckReport {
  double max_rel_mse = 0.0;  // cls + obj terms vs central differences
  double max_rel_reg = 0.0;  // reg term vs central differences
  double max_rel() const { return std::max(max_rel_mse, max_rel_reg); }
};

/// Verifies the analytic gradient of akdm_loss w.r.t. every student logit
/// against central finite differences (assignment held constant).
GradCheckReport akdm_grad_check(const LogitsBundle& student,
                                const LogitsBundle& teacher,
                                const PositiveSet& positives);

/// Self-describing binary bundle container: magic "T4BL", version u32,
/// level count u32, then per level a stride u32 followed by the cls, obj
/// and reg tensors in the standard tensor layout.
void save_bundle(const LogitsBundle& bundle,
                 const std::filesystem::path& path);
LogitsBundle load_bundle(const std::filesystem::path& path);

enum class ModelScale { kSmall, kMedium, kLarge };

ModelScale parse_model_scale(const std::string& tag);

/// task_loss + w(scale) * akdm with w = 0.2 / 0.2 / 0.1 for S / M / L.
double weighted_total(double task_loss, double akdm, ModelScale scale);

}  // namespace streambench
