#include "streambench/selfcheck.hpp"

#include <cmath>

#include "streambench/distill.hpp"
#include "streambench/geometry.hpp"
#include "streambench/kernels.hpp"
#include "streambench/pyramid.hpp"
#include "streambench/rng.hpp"

namespace streambench {

namespace {

Tensor4 random_tensor(Rng& rng, int n, int c, int h, int w) {
  Tensor4 t(n, c, h, w);
  for (double& v : t.data()) v = rng.next_uniform(-1.0, 1.0);
  return t;
}

ConvParams random_conv(Rng& rng, int c_out, int c_in, int k, int stride = 1) {
  ConvParams p = ConvParams::make(c_out, c_in, k, stride, k == 1 ? 0 : -1);
  for (double& v : p.weight.data()) v = rng.next_uniform(-1.0, 1.0);
  for (double& v : p.bias) v = rng.next_uniform(-0.5, 0.5);
  return p;
}

BatchNorm random_bn(Rng& rng, int channels) {
  BatchNorm bn;
  for (int c = 0; c < channels; ++c) {
    bn.mean.push_back(rng.next_uniform(-0.5, 0.5));
    bn.var.push_back(rng.next_uniform(0.2, 1.5));
    bn.gamma.push_back(rng.next_uniform(0.5, 1.5));
    bn.beta.push_back(rng.next_uniform(-0.5, 0.5));
  }
  return bn;
}

double max_rel_diff(const Tensor4& a, const Tensor4& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom =
        std::max({std::abs(a.data()[i]), std::abs(b.data()[i]), 1.0});
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]) / denom);
  }
  return worst;
}

LogitsBundle random_bundle(Rng& rng, int classes, int h, int w) {
  LogitsBundle bundle;
  LogitsLevel level;
  level.stride = 8;
  level.cls = random_tensor(rng, 1, classes, h, w);
  level.obj = random_tensor(rng, 1, 1, h, w);
  level.reg = random_tensor(rng, 1, 4, h, w);
  bundle.levels.push_back(std::move(level));
  return bundle;
}

}  // namespace

std::vector<SelfCheckResult> run_selfcheck(std::uint64_t seed,
                                           double tolerance_scale) {
  std::vector<SelfCheckResult> results;
  auto record = [&](const std::string& property, double max_error,
                    double tolerance) {
    results.push_back({property, max_error, tolerance * tolerance_scale,
                       max_error <= tolerance * tolerance_scale});
  };

  {  // geometry fixture against the closed-form values
    const BoundingBox a{0, 0, 10, 10}, b{5, 5, 15, 15};
    const double iou_err = std::abs(iou(a, b) - 25.0 / 175.0);
    const double giou_err =
        std::abs(giou(a, b) - (25.0 / 175.0 - 50.0 / 225.0));
    record("geometry/iou_giou_fixture", std::max(iou_err, giou_err), 1e-9);
  }

  {  // deformable conv with zero offsets must equal plain conv exactly
    Rng rng(substream_seed(seed, "selfcheck/deform"));
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Tensor4 x = random_tensor(rng, 1, 3, 9, 11);
      const ConvParams p = random_conv(rng, 4, 3, 3);
      const Tensor4 plain = conv2d(x, p);
      const OffsetField zero(1, 2 * 9, plain.h(), plain.w());
      const Tensor4 deformed = deform_conv2d(x, p, zero);
      for (std::size_t i = 0; i < plain.size(); ++i) {
        if (!(plain.data()[i] == deformed.data()[i])) worst = 1.0;
      }
    }
    record("kernels/deform_zero_offsets_exact", worst, 0.0);
  }

  {  // re-parameterized fusion forward equivalence, 100 seeded configs
    Rng rng(substream_seed(seed, "selfcheck/repfuse"));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int c = 2 + static_cast<int>(rng.next_u64() % 3);
      RepBranches branches;
      branches.main = random_conv(rng, c, c, 3);
      branches.side = random_conv(rng, c, c, 1);
      branches.identity_enabled = trial % 2 == 0;
      branches.main_bn = random_bn(rng, c);
      branches.side_bn = random_bn(rng, c);
      branches.identity_bn = random_bn(rng, c);
      const Tensor4 x = random_tensor(rng, 1, c, 7, 7);
      const Tensor4 fused = conv2d(x, rep_fuse(branches));
      const Tensor4 multi = rep_branches_forward(x, branches);
      worst = std::max(worst, max_rel_diff(fused, multi));
    }
    record("kernels/rep_fuse_equivalence", worst, 1e-6);
  }

  {  // pyramid level sizes for the canonical input resolution
    const auto shapes = drfpn_shapes(PyramidSpec::drfpn(608, 960));
    double err = 0.0;
    auto expect = [&](const std::string& name, int h, int w) {
      const NodeShape& s = shapes.at(name);
      if (s.height != h || s.width != w) err = 1.0;
    };
    expect("n8", 76, 120);
    expect("n16", 38, 60);
    expect("n32", 19, 30);
    record("pyramid/level_sizes_608x960", err, 0.0);
  }

  {  // distillation loss and gradients
    Rng rng(substream_seed(seed, "selfcheck/akdm"));
    const LogitsBundle teacher = random_bundle(rng, 3, 4, 4);
    LogitsBundle student = teacher;
    for (auto& level : student.levels) {
      for (double& v : level.cls.data()) v += rng.next_uniform(-0.3, 0.3);
      for (double& v : level.obj.data()) v += rng.next_uniform(-0.3, 0.3);
      for (double& v : level.reg.data()) v += rng.next_uniform(-0.2, 0.2);
    }
    const std::vector<AssignTruth> truths = {
        {decode_reg(teacher.levels[0].reg, 0, 1, 1, 8), 1},
        {decode_reg(teacher.levels[0].reg, 0, 2, 3, 8), 2}};
    const PositiveSet positives = ota_assign(teacher, truths);
    const AkdmLoss self = akdm_loss(teacher, teacher, positives);
    record("distill/identity_loss_zero", std::abs(self.total), 0.0);
    const GradCheckReport grads =
        akdm_grad_check(student, teacher, positives);
    record("distill/mse_gradients", grads.max_rel_mse, 1e-10);
    record("distill/giou_gradients", grads.max_rel_reg, 1e-4);
  }

  return results;
}

}  // namespace streambench
