#pragma once

#include "streambench/types.hpp"

namespace streambench {

/// Partial derivatives of giou_loss with respect to the predicted box's
/// four corner coordinates.
struct GradGIoU {
  double d_x_min = 0.0;
  double d_y_min = 0.0;
  double d_x_max = 0.0;
  double d_y_max = 0.0;
};

/// Intersection over union, in [0, 1].
/// Throws DegenerateGeometryError when both boxes have zero area.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Generalized IoU: iou minus the empty fraction of the smallest enclosing
/// box. Range (-1, 1]. Same degeneracy rule as iou.
double giou(const BoundingBox& a, const BoundingBox& b);

/// 1 - giou(pred, target), in [0, 2).
double giou_loss(const BoundingBox& pred, const BoundingBox& target);

/// Analytic gradient of giou_loss w.r.t. pred. At non-differentiable
/// corner-ordering boundaries the subgradient from the interior side is
/// used. Throws DegenerateGeometryError when pred has zero area.
GradGIoU giou_loss_grad(const BoundingBox& pred, const BoundingBox& target);

}  // namespace streambench
