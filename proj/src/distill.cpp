#include "streambench/distill.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <tuple>

namespace streambench {

void LogitsBundle::check() const {
  if (levels.empty()) throw ShapeError("logits bundle has no levels");
  for (const LogitsLevel& level : levels) {
    if (level.stride < 1) throw ShapeError("logits level stride must be >= 1");
    if (level.obj.c() != 1) throw ShapeError("obj logits must have 1 channel");
    if (level.reg.c() != 4) throw ShapeError("reg logits must have 4 channels");
    if (level.cls.n() != batch() || level.obj.n() != batch() ||
        level.reg.n() != batch()) {
      throw ShapeError("logits batch sizes disagree");
    }
    if (level.cls.c() != num_classes()) {
      throw ShapeError("cls channel counts disagree across levels");
    }
    if (level.cls.h() != level.obj.h() || level.cls.h() != level.reg.h() ||
        level.cls.w() != level.obj.w() || level.cls.w() != level.reg.w()) {
      throw ShapeError("logits spatial shapes disagree within a level");
    }
  }
}

bool LogitsBundle::same_shape(const LogitsBundle& other) const {
  if (levels.size() != other.levels.size()) return false;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].stride != other.levels[i].stride ||
        !levels[i].cls.same_shape(other.levels[i].cls) ||
        !levels[i].obj.same_shape(other.levels[i].obj) ||
        !levels[i].reg.same_shape(other.levels[i].reg)) {
      return false;
    }
  }
  return true;
}

int LogitsBundle::num_classes() const {
  return levels.empty() ? 0 : levels.front().cls.c();
}

int LogitsBundle::batch() const {
  return levels.empty() ? 0 : levels.front().cls.n();
}

BoundingBox decode_reg(const Tensor4& reg, int n, int grid_y, int grid_x,
                       int stride) {
  if (reg.c() != 4) throw ShapeError("decode_reg: reg must have 4 channels");
  if (n < 0 || n >= reg.n() || grid_y < 0 || grid_y >= reg.h() ||
      grid_x < 0 || grid_x >= reg.w()) {
    throw RangeError("decode_reg: grid position out of range");
  }
  const double dx = reg.at(n, 0, grid_y, grid_x);
  const double dy = reg.at(n, 1, grid_y, grid_x);
  const double lw = reg.at(n, 2, grid_y, grid_x);
  const double lh = reg.at(n, 3, grid_y, grid_x);
  if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(lw) ||
      !std::isfinite(lh)) {
    throw RangeError("decode_reg: non-finite logits");
  }
  if (std::abs(lw) > kSizeLogitCap || std::abs(lh) > kSizeLogitCap) {
    throw RangeError("decode_reg: size logit beyond cap " +
                     std::to_string(kSizeLogitCap));
  }
  const double cx = (grid_x + dx) * stride;
  const double cy = (grid_y + dy) * stride;
  const double w = std::exp(lw) * stride;
  const double h = std::exp(lh) * stride;
  return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

std::size_t PositiveSet::count() const {
  std::size_t total = 0;
  for (const auto& level : assigned) {
    total += static_cast<std::size_t>(
        std::count_if(level.begin(), level.end(), [](int v) { return v >= 0; }));
  }
  return total;
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double box_iou_or_zero(const BoundingBox& a, const BoundingBox& b) {
  if (a.area() <= 0.0 && b.area() <= 0.0) return 0.0;
  return iou(a, b);
}

struct Candidate {
  int level;
  int y;
  int x;
  double cost;
  double iou;
};

}  // namespace

PositiveSet ota_assign(const LogitsBundle& bundle,
                       const std::vector<AssignTruth>& truths,
                       const OtaParams& params) {
  bundle.check();
  if (bundle.batch() != 1) {
    throw ShapeError("ota_assign: expects batch == 1");
  }
  PositiveSet positives;
  for (const LogitsLevel& level : bundle.levels) {
    positives.assigned.emplace_back(
        static_cast<std::size_t>(level.cls.h()) * level.cls.w(), -1);
  }
  if (truths.empty()) return positives;

  const int num_classes = bundle.num_classes();
  struct Proposal {
    int truth;
    Candidate cand;
  };
  std::vector<Proposal> proposals;

  for (std::size_t g = 0; g < truths.size(); ++g) {
    const AssignTruth& truth = truths[g];
    std::vector<Candidate> cands;
    for (std::size_t li = 0; li < bundle.levels.size(); ++li) {
      const LogitsLevel& level = bundle.levels[li];
      const double s = level.stride;
      for (int y = 0; y < level.cls.h(); ++y) {
        for (int x = 0; x < level.cls.w(); ++x) {
          const double gcx = (x + 0.5) * s;
          const double gcy = (y + 0.5) * s;
          const bool in_box = gcx >= truth.bbox.x_min &&
                              gcx <= truth.bbox.x_max &&
                              gcy >= truth.bbox.y_min &&
                              gcy <= truth.bbox.y_max;
          const bool in_center =
              std::abs(gcx - truth.bbox.center_x()) <= params.center_radius * s &&
              std::abs(gcy - truth.bbox.center_y()) <= params.center_radius * s;
          if (!in_box && !in_center) continue;

          const BoundingBox decoded =
              decode_reg(level.reg, 0, y, x, level.stride);
          const double v = box_iou_or_zero(decoded, truth.bbox);
          const double obj_p = sigmoid(level.obj.at(0, 0, y, x));
          double cls_cost = 0.0;
          for (int c = 0; c < num_classes; ++c) {
            const double p = sigmoid(level.cls.at(0, c, y, x)) * obj_p;
            const double target = c == truth.category ? 1.0 : 0.0;
            cls_cost += (p - target) * (p - target);
          }
          cands.push_back({static_cast<int>(li), y, x,
                           cls_cost + params.cost_iou_weight * (1.0 - v), v});
        }
      }
    }

    if (cands.empty()) {
      // Nearest grid center fallback keeps every truth with >= 1 positive.
      double best_d2 = std::numeric_limits<double>::infinity();
      Candidate best{0, 0, 0, 0.0, 0.0};
      bool found = false;
      for (std::size_t li = 0; li < bundle.levels.size(); ++li) {
        const LogitsLevel& level = bundle.levels[li];
        const double s = level.stride;
        for (int y = 0; y < level.cls.h(); ++y) {
          for (int x = 0; x < level.cls.w(); ++x) {
            const double ddx = (x + 0.5) * s - truth.bbox.center_x();
            const double ddy = (y + 0.5) * s - truth.bbox.center_y();
            const double d2 = ddx * ddx + ddy * ddy;
            if (d2 < best_d2) {
              best_d2 = d2;
              const BoundingBox decoded =
                  decode_reg(level.reg, 0, y, x, level.stride);
              best = {static_cast<int>(li), y, x, 0.0,
                      box_iou_or_zero(decoded, truth.bbox)};
              found = true;
            }
          }
        }
      }
      if (found) cands.push_back(best);
    }
    if (cands.empty()) continue;

    // dynamic-k from the IoU mass of the best candidates
    std::vector<double> ious;
    ious.reserve(cands.size());
    for (const Candidate& c : cands) ious.push_back(c.iou);
    std::sort(ious.rbegin(), ious.rend());
    double iou_sum = 0.0;
    for (std::size_t i = 0;
         i < std::min<std::size_t>(ious.size(), params.top_candidates); ++i) {
      iou_sum += ious[i];
    }
    const int dynamic_k = std::clamp(
        static_cast<int>(std::lround(iou_sum)), 1,
        static_cast<int>(cands.size()));

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.cost != b.cost) return a.cost < b.cost;
                if (a.level != b.level) return a.level < b.level;
                if (a.y != b.y) return a.y < b.y;
                return a.x < b.x;
              });
    for (int i = 0; i < dynamic_k; ++i) {
      proposals.push_back({static_cast<int>(g), cands[i]});
    }
  }

  // A position claimed by two truths goes to the lower cost.
  struct Winner {
    int truth;
    double cost;
  };
  std::map<std::tuple<int, int, int>, Winner> winners;
  for (const Proposal& p : proposals) {
    const auto key = std::make_tuple(p.cand.level, p.cand.y, p.cand.x);
    auto it = winners.find(key);
    if (it == winners.end() || p.cand.cost < it->second.cost) {
      winners[key] = {p.truth, p.cand.cost};
    }
  }
  for (const auto& [key, winner] : winners) {
    const auto [level, y, x] = key;
    positives.assigned[level][static_cast<std::size_t>(y) *
                                  bundle.levels[level].cls.w() +
                              x] = winner.truth;
  }
  return positives;
}

namespace {

struct MseTerm {
  double sum = 0.0;
  std::size_t count = 0;
};

MseTerm mse_over(const LogitsBundle& a, const LogitsBundle& b,
                 Tensor4 LogitsLevel::*field) {
  MseTerm term;
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    const Tensor4& ta = a.levels[i].*field;
    const Tensor4& tb = b.levels[i].*field;
    for (std::size_t j = 0; j < ta.size(); ++j) {
      const double d = ta.data()[j] - tb.data()[j];
      term.sum += d * d;
    }
    term.count += ta.size();
  }
  return term;
}

void check_positive_shape(const LogitsBundle& bundle,
                          const PositiveSet& positives) {
  if (positives.assigned.size() != bundle.levels.size()) {
    throw ShapeError("positives do not match bundle level count");
  }
  for (std::size_t i = 0; i < bundle.levels.size(); ++i) {
    const auto expected = static_cast<std::size_t>(bundle.levels[i].cls.h()) *
                          bundle.levels[i].cls.w();
    if (positives.assigned[i].size() != expected) {
      throw ShapeError("positives do not match level grid size");
    }
  }
}

}  // namespace

AkdmLoss akdm_loss(const LogitsBundle& student, const LogitsBundle& teacher,
                   const PositiveSet& positives) {
  student.check();
  teacher.check();
  if (!student.same_shape(teacher)) {
    throw ShapeError("akdm_loss: student and teacher shapes differ");
  }
  check_positive_shape(student, positives);

  AkdmLoss loss;
  const MseTerm cls = mse_over(student, teacher, &LogitsLevel::cls);
  const MseTerm obj = mse_over(student, teacher, &LogitsLevel::obj);
  loss.cls = cls.count ? cls.sum / static_cast<double>(cls.count) : 0.0;
  loss.obj = obj.count ? obj.sum / static_cast<double>(obj.count) : 0.0;

  double reg_sum = 0.0;
  std::size_t reg_count = 0;
  for (std::size_t li = 0; li < student.levels.size(); ++li) {
    const LogitsLevel& ls = student.levels[li];
    const LogitsLevel& lt = teacher.levels[li];
    for (int y = 0; y < ls.reg.h(); ++y) {
      for (int x = 0; x < ls.reg.w(); ++x) {
        if (positives.assigned[li][static_cast<std::size_t>(y) * ls.reg.w() +
                                   x] < 0) {
          continue;
        }
        for (int n = 0; n < student.batch(); ++n) {
          reg_sum += giou_loss(decode_reg(ls.reg, n, y, x, ls.stride),
                               decode_reg(lt.reg, n, y, x, lt.stride));
          ++reg_count;
        }
      }
    }
  }
  if (reg_count == 0) {
    loss.empty_positives = true;
    loss.reg = 0.0;
  } else {
    loss.reg = reg_sum / static_cast<double>(reg_count);
  }
  loss.total = loss.cls + loss.obj + loss.reg;
  return loss;
}

namespace {

double reg_term_only(const LogitsBundle& student, const LogitsBundle& teacher,
                     const PositiveSet& positives) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t li = 0; li < student.levels.size(); ++li) {
    const LogitsLevel& ls = student.levels[li];
    const LogitsLevel& lt = teacher.levels[li];
    for (int y = 0; y < ls.reg.h(); ++y) {
      for (int x = 0; x < ls.reg.w(); ++x) {
        if (positives.assigned[li][static_cast<std::size_t>(y) * ls.reg.w() +
                                   x] < 0) {
          continue;
        }
        for (int n = 0; n < student.batch(); ++n) {
          sum += giou_loss(decode_reg(ls.reg, n, y, x, ls.stride),
                           decode_reg(lt.reg, n, y, x, lt.stride));
          ++count;
        }
      }
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double rel_error(double a, double b, double floor) {
  const double diff = std::abs(a - b);
  const double denom = std::max({std::abs(a), std::abs(b), floor});
  return diff / denom;
}

}  // namespace

GradCheckReport akdm_grad_check(const LogitsBundle& student,
                                const LogitsBundle& teacher,
                                const PositiveSet& positives) {
  student.check();
  teacher.check();
  if (!student.same_shape(teacher)) {
    throw ShapeError("akdm_grad_check: student and teacher shapes differ");
  }
  check_positive_shape(student, positives);
  GradCheckReport report;
  LogitsBundle probe = student;

  // MSE terms: analytic gradient 2(s - t)/M, finite differences on the
  // term alone. h can be large because the objective is quadratic.
  const double h_mse = 1e-3;
  for (Tensor4 LogitsLevel::*field : {&LogitsLevel::cls, &LogitsLevel::obj}) {
    const MseTerm term = mse_over(student, teacher, field);
    if (term.count == 0) continue;
    const double m = static_cast<double>(term.count);
    for (std::size_t li = 0; li < student.levels.size(); ++li) {
      Tensor4& tensor = probe.levels[li].*field;
      const Tensor4& t_teacher = teacher.levels[li].*field;
      for (std::size_t j = 0; j < tensor.size(); ++j) {
        const double analytic =
            2.0 * (tensor.data()[j] - t_teacher.data()[j]) / m;
        const double saved = tensor.data()[j];
        tensor.data()[j] = saved + h_mse;
        const double up = mse_over(probe, teacher, field).sum / m;
        tensor.data()[j] = saved - h_mse;
        const double down = mse_over(probe, teacher, field).sum / m;
        tensor.data()[j] = saved;
        const double fd = (up - down) / (2.0 * h_mse);
        report.max_rel_mse =
            std::max(report.max_rel_mse, rel_error(analytic, fd, 1e-6));
      }
    }
  }

  // Regression term: chain rule through the grid decode into the GIoU
  // gradient, averaged over positives.
  std::size_t reg_count = 0;
  for (std::size_t li = 0; li < student.levels.size(); ++li) {
    for (int v : positives.assigned[li]) {
      if (v >= 0) reg_count += static_cast<std::size_t>(student.batch());
    }
  }
  if (reg_count > 0) {
    const double h_reg = 1e-5;
    const double inv = 1.0 / static_cast<double>(reg_count);
    for (std::size_t li = 0; li < student.levels.size(); ++li) {
      LogitsLevel& ls = probe.levels[li];
      const LogitsLevel& lt = teacher.levels[li];
      for (int y = 0; y < ls.reg.h(); ++y) {
        for (int x = 0; x < ls.reg.w(); ++x) {
          const bool positive =
              positives.assigned[li][static_cast<std::size_t>(y) * ls.reg.w() +
                                     x] >= 0;
          for (int n = 0; n < ls.reg.n(); ++n) {
            double analytic[4] = {0.0, 0.0, 0.0, 0.0};
            if (positive) {
              const BoundingBox ps = decode_reg(ls.reg, n, y, x, ls.stride);
              const BoundingBox pt = decode_reg(lt.reg, n, y, x, lt.stride);
              const GradGIoU gg = giou_loss_grad(ps, pt);
              const double s = ls.stride;
              analytic[0] = s * (gg.d_x_min + gg.d_x_max) * inv;
              analytic[1] = s * (gg.d_y_min + gg.d_y_max) * inv;
              analytic[2] = 0.5 * ps.width() * (gg.d_x_max - gg.d_x_min) * inv;
              analytic[3] =
                  0.5 * ps.height() * (gg.d_y_max - gg.d_y_min) * inv;
            }
            for (int c = 0; c < 4; ++c) {
              const double saved = ls.reg.at(n, c, y, x);
              ls.reg.at(n, c, y, x) = saved + h_reg;
              const double up = reg_term_only(probe, teacher, positives);
              ls.reg.at(n, c, y, x) = saved - h_reg;
              const double down = reg_term_only(probe, teacher, positives);
              ls.reg.at(n, c, y, x) = saved;
              const double fd = (up - down) / (2.0 * h_reg);
              report.max_rel_reg = std::max(report.max_rel_reg,
                                            rel_error(analytic[c], fd, 1e-6));
            }
          }
        }
      }
    }
  }
  return report;
}

namespace {

constexpr char kBundleMagic[4] = {'T', '4', 'B', 'L'};
constexpr std::uint32_t kBundleVersion = 1;

}  // namespace

void save_bundle(const LogitsBundle& bundle,
                 const std::filesystem::path& path) {
  bundle.check();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for write");
  out.write(kBundleMagic, 4);
  const std::uint32_t version = kBundleVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const auto count = static_cast<std::uint32_t>(bundle.levels.size());
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const LogitsLevel& level : bundle.levels) {
    const auto stride = static_cast<std::uint32_t>(level.stride);
    out.write(reinterpret_cast<const char*>(&stride), sizeof(stride));
    write_tensor(out, level.cls);
    write_tensor(out, level.obj);
    write_tensor(out, level.reg);
  }
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

LogitsBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kBundleMagic, 4) != 0) {
    throw ParseError("'" + path.string() + "' is not a logits bundle file");
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kBundleVersion) {
    throw ParseError("unsupported bundle version in '" + path.string() + "'");
  }
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw ParseError("bundle truncated in '" + path.string() + "'");
  LogitsBundle bundle;
  for (std::uint32_t i = 0; i < count; ++i) {
    LogitsLevel level;
    std::uint32_t stride = 0;
    in.read(reinterpret_cast<char*>(&stride), sizeof(stride));
    if (!in) throw ParseError("bundle truncated in '" + path.string() + "'");
    level.stride = static_cast<int>(stride);
    level.cls = read_tensor(in);
    level.obj = read_tensor(in);
    level.reg = read_tensor(in);
    bundle.levels.push_back(std::move(level));
  }
  bundle.check();
  return bundle;
}

ModelScale parse_model_scale(const std::string& tag) {
  if (tag == "S" || tag == "s" || tag == "small") return ModelScale::kSmall;
  if (tag == "M" || tag == "m" || tag == "medium") return ModelScale::kMedium;
  if (tag == "L" || tag == "l" || tag == "large") return ModelScale::kLarge;
  throw ConfigError("unknown model scale '" + tag + "' (expected S, M or L)");
}

double weighted_total(double task_loss, double akdm, ModelScale scale) {
  if (!std::isfinite(task_loss) || !std::isfinite(akdm)) {
    throw RangeError("weighted_total: losses must be finite");
  }
  double weight = 0.0;
  switch (scale) {
    case ModelScale::kSmall:
    case ModelScale::kMedium:
      weight = 0.2;
      break;
    case ModelScale::kLarge:
      weight = 0.1;
      break;
  }
  return task_loss + weight * akdm;
}

}  // namespace streambench
