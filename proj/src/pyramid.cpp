#include "streambench/pyramid.hpp"

#include <algorithm>
#include <map>

namespace streambench {

namespace {

std::string level_name(const char* prefix, int stride) {
  return std::string(prefix) + std::to_string(stride);
}

}  // namespace

PyramidSpec PyramidSpec::pafpn(int input_height, int input_width,
                               const std::vector<int>& strides,
                               const std::vector<int>& channels) {
  if (strides.size() < 2 || strides.size() != channels.size()) {
    throw ConfigError("pyramid: need >= 2 strides with matching channels");
  }
  PyramidSpec spec;
  spec.input_height = input_height;
  spec.input_width = input_width;
  const int n = static_cast<int>(strides.size());
  for (int i = 0; i < n; ++i) {
    spec.nodes.push_back({level_name("b", strides[i]), strides[i], channels[i]});
    spec.nodes.push_back({level_name("t", strides[i]), strides[i], channels[i]});
    spec.nodes.push_back({level_name("n", strides[i]), strides[i], channels[i]});
  }
  // Top-down pathway, coarsest first.
  spec.edges.push_back({level_name("b", strides[n - 1]),
                        level_name("t", strides[n - 1]), EdgeKind::kLateral});
  for (int i = n - 2; i >= 0; --i) {
    spec.edges.push_back({level_name("b", strides[i]),
                          level_name("t", strides[i]), EdgeKind::kLateral});
    spec.edges.push_back({level_name("t", strides[i + 1]),
                          level_name("t", strides[i]), EdgeKind::kTopDown});
  }
  // Bottom-up pathway.
  spec.edges.push_back({level_name("t", strides[0]), level_name("n", strides[0]),
                        EdgeKind::kLateral});
  for (int i = 1; i < n; ++i) {
    spec.edges.push_back({level_name("t", strides[i]),
                          level_name("n", strides[i]), EdgeKind::kLateral});
    spec.edges.push_back({level_name("n", strides[i - 1]),
                          level_name("n", strides[i]), EdgeKind::kBottomUp});
  }
  return spec;
}

PyramidSpec PyramidSpec::drfpn(int input_height, int input_width,
                               const std::vector<int>& strides,
                               const std::vector<int>& channels) {
  PyramidSpec spec = pafpn(input_height, input_width, strides, channels);
  // Auxiliary shortcuts from every backbone level into each coarser fused
  // output, bridging low- and high-level features.
  const int n = static_cast<int>(strides.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      spec.edges.push_back({level_name("b", strides[i]),
                            level_name("n", strides[j]),
                            EdgeKind::kAuxiliary});
    }
  }
  return spec;
}

std::map<std::string, NodeShape> drfpn_shapes(const PyramidSpec& spec) {
  std::map<std::string, const PyramidNode*> nodes;
  for (const PyramidNode& node : spec.nodes) {
    if (node.stride < 1 || node.channels < 1) {
      throw ConfigError("pyramid: node '" + node.name +
                        "' has invalid stride or channels");
    }
    if (!nodes.emplace(node.name, &node).second) {
      throw ConfigError("pyramid: duplicate node '" + node.name + "'");
    }
  }
  std::map<std::string, std::vector<const PyramidEdge*>> inbound;
  std::map<std::string, int> pending;
  for (const PyramidNode& node : spec.nodes) pending[node.name] = 0;
  for (const PyramidEdge& edge : spec.edges) {
    if (!nodes.count(edge.from) || !nodes.count(edge.to)) {
      throw ConfigError("pyramid: edge references unknown node '" +
                        edge.from + "' -> '" + edge.to + "'");
    }
    inbound[edge.to].push_back(&edge);
    ++pending[edge.to];
  }

  auto base_shape = [&](const PyramidNode& node) {
    return NodeShape{node.channels, spec.input_height / node.stride,
                     spec.input_width / node.stride};
  };

  // Kahn topological order; anything left over is a cycle.
  std::map<std::string, NodeShape> shapes;
  std::vector<std::string> ready;
  std::map<std::string, std::vector<std::string>> successors;
  for (const PyramidEdge& edge : spec.edges) {
    successors[edge.from].push_back(edge.to);
  }
  for (const auto& [name, count] : pending) {
    if (count == 0) ready.push_back(name);
  }
  std::sort(ready.begin(), ready.end());
  std::size_t resolved = 0;
  while (!ready.empty()) {
    const std::string name = ready.back();
    ready.pop_back();
    ++resolved;
    const PyramidNode& node = *nodes.at(name);
    const NodeShape expected = base_shape(node);

    for (const PyramidEdge* edge : inbound[name]) {
      const PyramidNode& src = *nodes.at(edge->from);
      const NodeShape& in = shapes.at(edge->from);
      NodeShape carried = in;
      switch (edge->kind) {
        case EdgeKind::kLateral:
          if (src.stride != node.stride) {
            throw ShapeError("pyramid: lateral edge '" + edge->from +
                             "' -> '" + name + "' must keep the stride");
          }
          break;
        case EdgeKind::kTopDown:
          if (src.stride != 2 * node.stride) {
            throw ShapeError("pyramid: top-down edge '" + edge->from +
                             "' -> '" + name +
                             "' must halve the stride");
          }
          carried.height = in.height * 2;
          carried.width = in.width * 2;
          break;
        case EdgeKind::kBottomUp:
          if (2 * src.stride != node.stride) {
            throw ShapeError("pyramid: bottom-up edge '" + edge->from +
                             "' -> '" + name +
                             "' must double the stride");
          }
          carried.height = in.height / 2;
          carried.width = in.width / 2;
          break;
        case EdgeKind::kAuxiliary: {
          const int a = src.stride, b = node.stride;
          const int ratio = a > b ? a / b : b / a;
          if (ratio * std::min(a, b) != std::max(a, b) ||
              (ratio & (ratio - 1)) != 0) {
            throw ShapeError("pyramid: auxiliary edge '" + edge->from +
                             "' -> '" + name +
                             "' needs a power-of-two stride ratio");
          }
          carried.height =
              a > b ? in.height * ratio : in.height / ratio;
          carried.width = a > b ? in.width * ratio : in.width / ratio;
          break;
        }
      }
      if (carried.height != expected.height ||
          carried.width != expected.width) {
        throw ShapeError("pyramid: illegal fusion at '" + name + "': edge '" +
                         edge->from + "' carries " +
                         std::to_string(carried.height) + "x" +
                         std::to_string(carried.width) + ", node expects " +
                         std::to_string(expected.height) + "x" +
                         std::to_string(expected.width));
      }
    }
    shapes[name] = expected;
    for (const std::string& next : successors[name]) {
      if (--pending[next] == 0) ready.push_back(next);
    }
  }
  if (resolved != spec.nodes.size()) {
    throw ConfigError("pyramid: wiring contains a cycle");
  }
  return shapes;
}

}  // namespace streambench
