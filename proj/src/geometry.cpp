#include "streambench/geometry.hpp"

#include <algorithm>

namespace streambench {

namespace {

void check_box(const BoundingBox& b, const char* who) {
  if (!b.valid()) {
    throw DegenerateGeometryError(std::string(who) +
                                  ": box must be finite with ordered corners");
  }
}

struct Overlap {
  double inter;      // intersection area
  double uni;        // union area
  double enclose;    // smallest enclosing box area
  double iw, ih;     // intersection extents (may be <= 0 when disjoint)
  double ew, eh;     // enclosing extents
};

Overlap overlap(const BoundingBox& a, const BoundingBox& b) {
  Overlap o{};
  o.iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  o.ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  o.inter = (o.iw > 0.0 && o.ih > 0.0) ? o.iw * o.ih : 0.0;
  o.uni = a.area() + b.area() - o.inter;
  o.ew = std::max(a.x_max, b.x_max) - std::min(a.x_min, b.x_min);
  o.eh = std::max(a.y_max, b.y_max) - std::min(a.y_min, b.y_min);
  o.enclose = o.ew * o.eh;
  return o;
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
  check_box(a, "iou");
  check_box(b, "iou");
  const Overlap o = overlap(a, b);
  if (o.uni <= 0.0) {
    throw DegenerateGeometryError("iou: both boxes have zero area");
  }
  return o.inter / o.uni;
}

double giou(const BoundingBox& a, const BoundingBox& b) {
  check_box(a, "giou");
  check_box(b, "giou");
  const Overlap o = overlap(a, b);
  if (o.uni <= 0.0) {
    throw DegenerateGeometryError("giou: both boxes have zero area");
  }
  return o.inter / o.uni - (o.enclose - o.uni) / o.enclose;
}

double giou_loss(const BoundingBox& pred, const BoundingBox& target) {
  return 1.0 - giou(pred, target);
}

GradGIoU giou_loss_grad(const BoundingBox& pred, const BoundingBox& target) {
  check_box(pred, "giou_loss_grad");
  check_box(target, "giou_loss_grad");
  if (pred.area() <= 0.0) {
    throw DegenerateGeometryError("giou_loss_grad: pred has zero area");
  }
  const Overlap o = overlap(pred, target);
  if (o.uni <= 0.0) {
    throw DegenerateGeometryError("giou_loss_grad: zero union");
  }

  // loss = 2 - I/U - U/E, so dloss = -(I'U - I U')/U^2 - (U'E - U E')/E^2
  // with U' = A_pred' - I'. Intersection/enclosure corner ownership picks
  // the subgradient from the interior side at ties.
  const double pw = pred.width(), ph = pred.height();
  const bool has_inter = o.iw > 0.0 && o.ih > 0.0;

  // d inter / d pred corner
  double di_x_min = 0.0, di_y_min = 0.0, di_x_max = 0.0, di_y_max = 0.0;
  if (has_inter) {
    if (pred.x_min >= target.x_min) di_x_min = -o.ih;
    if (pred.x_max <= target.x_max) di_x_max = o.ih;
    if (pred.y_min >= target.y_min) di_y_min = -o.iw;
    if (pred.y_max <= target.y_max) di_y_max = o.iw;
  }

  // d area(pred) / d pred corner
  const double da_x_min = -ph, da_x_max = ph;
  const double da_y_min = -pw, da_y_max = pw;

  // d enclose / d pred corner
  double de_x_min = 0.0, de_y_min = 0.0, de_x_max = 0.0, de_y_max = 0.0;
  if (pred.x_min <= target.x_min) de_x_min = -o.eh;
  if (pred.x_max >= target.x_max) de_x_max = o.eh;
  if (pred.y_min <= target.y_min) de_y_min = -o.ew;
  if (pred.y_max >= target.y_max) de_y_max = o.ew;

  const double U2 = o.uni * o.uni;
  const double E2 = o.enclose * o.enclose;
  auto component = [&](double di, double da, double de) {
    const double du = da - di;
    return -(di * o.uni - o.inter * du) / U2 -
           (du * o.enclose - o.uni * de) / E2;
  };

  GradGIoU g;
  g.d_x_min = component(di_x_min, da_x_min, de_x_min);
  g.d_y_min = component(di_y_min, da_y_min, de_y_min);
  g.d_x_max = component(di_x_max, da_x_max, de_x_max);
  g.d_y_max = component(di_y_max, da_y_max, de_y_max);
  return g;
}

}  // namespace streambench
