#pragma once

#include <map>
#include <string>
#include <vector>

#include "streambench/errors.hpp"

namespace streambench {

enum class EdgeKind {
  kLateral,    // same stride, shape passthrough
  kTopDown,    // 2x upsample into the next finer level
  kBottomUp,   // 2x downsample into the next coarser level
  kAuxiliary,  // bottom-up auxiliary connect; any power-of-two stride ratio
};

struct PyramidNode {
  std::string name;
  int stride = 8;
  int channels = 256;
};

struct PyramidEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::kLateral;
};

/// Feature pyramid wiring plus the input resolution it runs at. Nodes with
/// no inbound edges are backbone outputs.
struct PyramidSpec {
  int input_height = 608;
  int input_width = 960;
  std::vector<PyramidNode> nodes;
  std::vector<PyramidEdge> edges;

  /// Sequential top-down + bottom-up wiring over the given strides.
  static PyramidSpec pafpn(int input_height, int input_width,
                           const std::vector<int>& strides = {8, 16, 32},
                           const std::vector<int>& channels = {256, 512,
                                                               1024});
  /// pafpn plus the bottom-up auxiliary connect shortcut edges that bridge
  /// low-level backbone features into the coarser fused outputs.
  static PyramidSpec drfpn(int input_height, int input_width,
                           const std::vector<int>& strides = {8, 16, 32},
                           const std::vector<int>& channels = {256, 512,
                                                               1024});
};

struct NodeShape {
  int channels = 0;
  int height = 0;
  int width = 0;
  bool operator==(const NodeShape&) const = default;
};

/// Symbolic shape propagation across the wiring. Throws ShapeError when a
/// fusion node receives inconsistent spatial shapes (or an edge implies an
/// impossible resampling), and ConfigError on cyclic or dangling wiring.
std::map<std::string, NodeShape> drfpn_shapes(const PyramidSpec& spec);

}  // namespace streambench
