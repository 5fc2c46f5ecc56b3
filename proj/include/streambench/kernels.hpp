#pragma once

#include <vector>

#include "streambench/tensor.hpp"

namespace streambench {

/// Dense 2D convolution parameters. Kernels are square with odd size;
/// padding (k-1)/2 keeps spatial dims for stride 1.
struct ConvParams {
  Tensor4 weight;             // (c_out, c_in, k, k)
  std::vector<double> bias;   // (c_out)
  int stride = 1;
  int padding = 0;

  int c_out() const { return weight.n(); }
  int c_in() const { return weight.c(); }
  int kernel() const { return weight.h(); }

  static ConvParams make(int c_out, int c_in, int k, int stride = 1,
                         int padding = -1);  // padding -1 => (k-1)/2
  void check() const;
};

/// Per-channel batch-norm statistics for one convolution branch.
struct BatchNorm {
  std::vector<double> mean, var, gamma, beta;
  double eps = 1e-5;

  static BatchNorm identity(int channels);
};

/// Training-time multi-branch block: 3x3 conv, 1x1 conv and an optional
/// identity shortcut, each followed by batch norm. Fusable into a single
/// 3x3 convolution for inference.
struct RepBranches {
  ConvParams main;   // 3x3
  ConvParams side;   // 1x1
  bool identity_enabled = false;
  BatchNorm main_bn, side_bn, identity_bn;
};

/// Learned sampling offsets for deformable convolution: per output position
/// 2*k*k reals, channel 2*tap = dx and 2*tap + 1 = dy for tap = ky*k + kx.
/// Offsets are unclamped; bilinear sampling reads out-of-bounds as zero.
using OffsetField = Tensor4;  // (n, 2*k*k, h_out, w_out)

/// Direct convolution with zero padding.
Tensor4 conv2d(const Tensor4& x, const ConvParams& p);

/// Bilinear interpolation of one channel plane; out-of-bounds reads zero.
double bilinear_sample(const Tensor4& x, int n, int c, double y, double x_pos);

/// Deformable convolution: each kernel tap samples at its base position
/// plus the learned offset. With zero offsets this equals conv2d exactly.
Tensor4 deform_conv2d(const Tensor4& x, const ConvParams& p,
                      const OffsetField& offsets);

/// Folds batch norm into each branch and collapses the block into a single
/// 3x3 convolution (1x1 embedded at the kernel center, identity as a
/// centered unit kernel).
ConvParams rep_fuse(const RepBranches& branches);

/// Forward pass through the unfused branches, for equivalence checks.
Tensor4 rep_branches_forward(const Tensor4& x, const RepBranches& branches);

/// Dual-path fusion: channel concat of the current-frame features with the
/// historical features, then a 1x1 reduction back to the short path width.
Tensor4 long_short_fuse(const Tensor4& short_path,
                        const std::vector<Tensor4>& long_path,
                        const ConvParams& reduce);

}  // namespace streambench
