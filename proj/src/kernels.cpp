#include "streambench/kernels.hpp"

#include <cmath>

namespace streambench {

ConvParams ConvParams::make(int c_out, int c_in, int k, int stride,
                            int padding) {
  ConvParams p;
  p.weight = Tensor4(c_out, c_in, k, k);
  p.bias.assign(c_out, 0.0);
  p.stride = stride;
  p.padding = padding < 0 ? (k - 1) / 2 : padding;
  p.check();
  return p;
}

void ConvParams::check() const {
  if (weight.h() != weight.w()) {
    throw ShapeError("conv: kernel must be square");
  }
  if (kernel() % 2 == 0) {
    throw ShapeError("conv: kernel size must be odd");
  }
  if (static_cast<int>(bias.size()) != c_out()) {
    throw ShapeError("conv: bias size must equal c_out");
  }
  if (stride < 1 || padding < 0) {
    throw ShapeError("conv: stride must be >= 1 and padding >= 0");
  }
}

BatchNorm BatchNorm::identity(int channels) {
  BatchNorm bn;
  bn.mean.assign(channels, 0.0);
  bn.var.assign(channels, 1.0);
  bn.gamma.assign(channels, 1.0);
  bn.beta.assign(channels, 0.0);
  bn.eps = 0.0;
  return bn;
}

namespace {

void check_conv_input(const Tensor4& x, const ConvParams& p) {
  p.check();
  if (x.c() != p.c_in()) {
    throw ShapeError("conv: input has " + std::to_string(x.c()) +
                     " channels, weight expects " + std::to_string(p.c_in()));
  }
  if (x.h() + 2 * p.padding < p.kernel() ||
      x.w() + 2 * p.padding < p.kernel()) {
    throw ShapeError("conv: input smaller than kernel");
  }
}

int out_extent(int in, int pad, int k, int stride) {
  return (in + 2 * pad - k) / stride + 1;
}

void apply_bn(Tensor4& x, const BatchNorm& bn) {
  if (static_cast<int>(bn.mean.size()) != x.c()) {
    throw ShapeError("batch norm stats do not match channel count");
  }
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      const double scale = bn.gamma[c] / std::sqrt(bn.var[c] + bn.eps);
      const double shift = bn.beta[c] - bn.mean[c] * scale;
      for (int y = 0; y < x.h(); ++y) {
        for (int xx = 0; xx < x.w(); ++xx) {
          x.at(n, c, y, xx) = x.at(n, c, y, xx) * scale + shift;
        }
      }
    }
  }
}

}  // namespace

Tensor4 conv2d(const Tensor4& x, const ConvParams& p) {
  check_conv_input(x, p);
  const int k = p.kernel();
  const int oh = out_extent(x.h(), p.padding, k, p.stride);
  const int ow = out_extent(x.w(), p.padding, k, p.stride);
  Tensor4 out(x.n(), p.c_out(), oh, ow);
  for (int n = 0; n < x.n(); ++n) {
    for (int co = 0; co < p.c_out(); ++co) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          double acc = p.bias[co];
          for (int ci = 0; ci < p.c_in(); ++ci) {
            for (int ky = 0; ky < k; ++ky) {
              for (int kx = 0; kx < k; ++kx) {
                const int iy = oy * p.stride - p.padding + ky;
                const int ix = ox * p.stride - p.padding + kx;
                acc += p.weight.at(co, ci, ky, kx) *
                       x.at_or_zero(n, ci, iy, ix);
              }
            }
          }
          out.at(n, co, oy, ox) = acc;
        }
      }
    }
  }
  return out;
}

double bilinear_sample(const Tensor4& x, int n, int c, double y,
                       double x_pos) {
  const double yf = std::floor(y);
  const double xf = std::floor(x_pos);
  const int y0 = static_cast<int>(yf);
  const int x0 = static_cast<int>(xf);
  const double fy = y - yf;
  const double fx = x_pos - xf;
  double v = 0.0;
  v += (1.0 - fy) * (1.0 - fx) * x.at_or_zero(n, c, y0, x0);
  v += (1.0 - fy) * fx * x.at_or_zero(n, c, y0, x0 + 1);
  v += fy * (1.0 - fx) * x.at_or_zero(n, c, y0 + 1, x0);
  v += fy * fx * x.at_or_zero(n, c, y0 + 1, x0 + 1);
  return v;
}

Tensor4 deform_conv2d(const Tensor4& x, const ConvParams& p,
                      const OffsetField& offsets) {
  check_conv_input(x, p);
  const int k = p.kernel();
  const int oh = out_extent(x.h(), p.padding, k, p.stride);
  const int ow = out_extent(x.w(), p.padding, k, p.stride);
  if (offsets.n() != x.n() || offsets.c() != 2 * k * k ||
      offsets.h() != oh || offsets.w() != ow) {
    throw ShapeError("deform_conv2d: offset field must be (n, 2k^2, oh, ow)");
  }
  Tensor4 out(x.n(), p.c_out(), oh, ow);
  for (int n = 0; n < x.n(); ++n) {
    for (int co = 0; co < p.c_out(); ++co) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          double acc = p.bias[co];
          for (int ci = 0; ci < p.c_in(); ++ci) {
            for (int ky = 0; ky < k; ++ky) {
              for (int kx = 0; kx < k; ++kx) {
                const int tap = ky * k + kx;
                const double dx = offsets.at(n, 2 * tap, oy, ox);
                const double dy = offsets.at(n, 2 * tap + 1, oy, ox);
                const double iy = oy * p.stride - p.padding + ky + dy;
                const double ix = ox * p.stride - p.padding + kx + dx;
                acc += p.weight.at(co, ci, ky, kx) *
                       bilinear_sample(x, n, ci, iy, ix);
              }
            }
          }
          out.at(n, co, oy, ox) = acc;
        }
      }
    }
  }
  return out;
}

namespace {

// Batch-norm folding: y = gamma * (conv(x) + b - mean) / sqrt(var+eps) + beta
// becomes a plain convolution with scaled weights and shifted bias.
ConvParams fold_bn(const ConvParams& conv, const BatchNorm& bn) {
  if (static_cast<int>(bn.mean.size()) != conv.c_out()) {
    throw ShapeError("rep_fuse: batch norm stats do not match c_out");
  }
  ConvParams folded = conv;
  for (int co = 0; co < conv.c_out(); ++co) {
    const double scale = bn.gamma[co] / std::sqrt(bn.var[co] + bn.eps);
    for (int ci = 0; ci < conv.c_in(); ++ci) {
      for (int ky = 0; ky < conv.kernel(); ++ky) {
        for (int kx = 0; kx < conv.kernel(); ++kx) {
          folded.weight.at(co, ci, ky, kx) *= scale;
        }
      }
    }
    folded.bias[co] = (conv.bias[co] - bn.mean[co]) * scale + bn.beta[co];
  }
  return folded;
}

void check_rep(const RepBranches& b) {
  b.main.check();
  b.side.check();
  if (b.main.kernel() != 3 || b.side.kernel() != 1) {
    throw ShapeError("rep_fuse: expects a 3x3 main and a 1x1 side branch");
  }
  if (b.main.c_in() != b.side.c_in() || b.main.c_out() != b.side.c_out()) {
    throw ShapeError("rep_fuse: branch channel counts disagree");
  }
  if (b.main.stride != b.side.stride) {
    throw ShapeError("rep_fuse: branch strides disagree");
  }
  if (b.main.padding != 1 || b.side.padding != 0) {
    throw ShapeError("rep_fuse: main needs padding 1, side padding 0");
  }
  if (b.identity_enabled) {
    if (b.main.c_in() != b.main.c_out()) {
      throw ShapeError(
          "rep_fuse: identity branch requires c_in == c_out");
    }
    if (b.main.stride != 1) {
      throw ShapeError("rep_fuse: identity branch requires stride 1");
    }
  }
}

}  // namespace

ConvParams rep_fuse(const RepBranches& branches) {
  check_rep(branches);
  const int c_out = branches.main.c_out();
  const int c_in = branches.main.c_in();

  const ConvParams main = fold_bn(branches.main, branches.main_bn);
  const ConvParams side = fold_bn(branches.side, branches.side_bn);

  ConvParams fused = main;
  for (int co = 0; co < c_out; ++co) {
    for (int ci = 0; ci < c_in; ++ci) {
      fused.weight.at(co, ci, 1, 1) += side.weight.at(co, ci, 0, 0);
    }
    fused.bias[co] += side.bias[co];
  }
  if (branches.identity_enabled) {
    ConvParams identity = ConvParams::make(c_out, c_in, 1, 1, 0);
    for (int c = 0; c < c_out; ++c) identity.weight.at(c, c, 0, 0) = 1.0;
    const ConvParams folded = fold_bn(identity, branches.identity_bn);
    for (int co = 0; co < c_out; ++co) {
      for (int ci = 0; ci < c_in; ++ci) {
        fused.weight.at(co, ci, 1, 1) += folded.weight.at(co, ci, 0, 0);
      }
      fused.bias[co] += folded.bias[co];
    }
  }
  return fused;
}

Tensor4 rep_branches_forward(const Tensor4& x, const RepBranches& branches) {
  check_rep(branches);
  Tensor4 main = conv2d(x, branches.main);
  apply_bn(main, branches.main_bn);
  Tensor4 side = conv2d(x, branches.side);
  apply_bn(side, branches.side_bn);
  for (std::size_t i = 0; i < main.size(); ++i) {
    main.data()[i] += side.data()[i];
  }
  if (branches.identity_enabled) {
    Tensor4 id = x;
    apply_bn(id, branches.identity_bn);
    for (std::size_t i = 0; i < main.size(); ++i) {
      main.data()[i] += id.data()[i];
    }
  }
  return main;
}

Tensor4 long_short_fuse(const Tensor4& short_path,
                        const std::vector<Tensor4>& long_path,
                        const ConvParams& reduce) {
  int channels = short_path.c();
  for (const Tensor4& t : long_path) {
    if (t.n() != short_path.n() || t.h() != short_path.h() ||
        t.w() != short_path.w()) {
      throw ShapeError("long_short_fuse: all paths must share (n, h, w)");
    }
    channels += t.c();
  }
  reduce.check();
  if (reduce.kernel() != 1 || reduce.stride != 1 || reduce.padding != 0) {
    throw ShapeError("long_short_fuse: reduce must be a 1x1/s1/p0 conv");
  }
  if (reduce.c_in() != channels || reduce.c_out() != short_path.c()) {
    throw ShapeError(
        "long_short_fuse: reduce must map concat channels to the short "
        "path width");
  }

  Tensor4 concat(short_path.n(), channels, short_path.h(), short_path.w());
  int offset = 0;
  auto copy_in = [&](const Tensor4& src) {
    for (int n = 0; n < src.n(); ++n) {
      for (int c = 0; c < src.c(); ++c) {
        for (int y = 0; y < src.h(); ++y) {
          for (int x = 0; x < src.w(); ++x) {
            concat.at(n, offset + c, y, x) = src.at(n, c, y, x);
          }
        }
      }
    }
    offset += src.c();
  };
  copy_in(short_path);
  for (const Tensor4& t : long_path) copy_in(t);
  return conv2d(concat, reduce);
}

}  // namespace streambench
