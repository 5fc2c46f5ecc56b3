#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "streambench/errors.hpp"

namespace streambench {

/// Dense NCHW tensor, row-major float64. Direct-loop kernels trade speed
/// for auditability; shapes stay desk-scale.
class Tensor4 {
 public:
  Tensor4() : dims_{0, 0, 0, 0} {}
  Tensor4(int n, int c, int h, int w, double fill = 0.0)
      : dims_{n, c, h, w},
        data_(static_cast<std::size_t>(n) * c * h * w, fill) {
    if (n < 0 || c < 0 || h < 0 || w < 0) {
      throw ShapeError("Tensor4: negative dimension");
    }
  }

  int n() const { return dims_[0]; }
  int c() const { return dims_[1]; }
  int h() const { return dims_[2]; }
  int w() const { return dims_[3]; }
  std::array<int, 4> dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  double& at(int n, int c, int y, int x) {
    return data_[index(n, c, y, x)];
  }
  double at(int n, int c, int y, int x) const {
    return data_[index(n, c, y, x)];
  }

  /// Zero for reads outside the spatial plane (zero padding semantics).
  double at_or_zero(int n, int c, int y, int x) const {
    if (y < 0 || y >= dims_[2] || x < 0 || x >= dims_[3]) return 0.0;
    return data_[index(n, c, y, x)];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor4& other) const { return dims_ == other.dims_; }
  bool operator==(const Tensor4& other) const = default;

 private:
  std::size_t index(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * dims_[1] + c) * dims_[2] + y) *
               dims_[3] +
           x;
  }

  std::array<int, 4> dims_;
  std::vector<double> data_;
};

/// Self-describing binary tensor layout: little-endian, magic "T4DS",
/// version u32, rank u32, dims u64 x rank, then float64 data row-major.
void save_tensor(const Tensor4& tensor, const std::filesystem::path& path);
Tensor4 load_tensor(const std::filesystem::path& path);

/// Stream forms of the same layout, for embedding tensors in containers.
void write_tensor(std::ostream& out, const Tensor4& tensor);
Tensor4 read_tensor(std::istream& in);

}  // namespace streambench
