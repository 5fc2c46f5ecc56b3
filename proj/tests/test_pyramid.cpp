#include <doctest.h>

#include "streambench/pyramid.hpp"

using namespace streambench;

TEST_CASE("level sizes follow input / stride") {
  const auto shapes = drfpn_shapes(PyramidSpec::drfpn(608, 960));
  CHECK(shapes.at("b8") == NodeShape{256, 76, 120});
  CHECK(shapes.at("n8") == NodeShape{256, 76, 120});
  CHECK(shapes.at("n16") == NodeShape{512, 38, 60});
  CHECK(shapes.at("n32") == NodeShape{1024, 19, 30});
  // arithmetic oracle: every node is input/stride
  for (const auto& [name, shape] : shapes) {
    CHECK(shape.height * (608 / shape.height) == 608);
  }
}

TEST_CASE("removing the auxiliary edges reproduces the pafpn shape graph") {
  PyramidSpec drfpn = PyramidSpec::drfpn(608, 960);
  const PyramidSpec pafpn = PyramidSpec::pafpn(608, 960);
  // strip auxiliary edges
  std::erase_if(drfpn.edges, [](const PyramidEdge& e) {
    return e.kind == EdgeKind::kAuxiliary;
  });
  CHECK(drfpn.edges.size() == pafpn.edges.size());
  CHECK(drfpn_shapes(drfpn) == drfpn_shapes(pafpn));
}

TEST_CASE("drfpn adds auxiliary edges onto pafpn") {
  const PyramidSpec drfpn = PyramidSpec::drfpn(608, 960);
  const PyramidSpec pafpn = PyramidSpec::pafpn(608, 960);
  int aux = 0;
  for (const PyramidEdge& e : drfpn.edges) {
    if (e.kind == EdgeKind::kAuxiliary) ++aux;
  }
  CHECK(aux == 3);  // b8->n16, b8->n32, b16->n32
  CHECK(drfpn.edges.size() == pafpn.edges.size() + 3);
  // both graphs resolve to the same node shapes
  CHECK(drfpn_shapes(drfpn) == drfpn_shapes(pafpn));
}

TEST_CASE("cyclic wiring is rejected") {
  PyramidSpec spec;
  spec.nodes = {{"a", 8, 16}, {"b", 8, 16}};
  spec.edges = {{"a", "b", EdgeKind::kLateral},
                {"b", "a", EdgeKind::kLateral}};
  CHECK_THROWS_AS(drfpn_shapes(spec), ConfigError);
}

TEST_CASE("inconsistent fusion is detected") {
  SUBCASE("lateral edge across strides") {
    PyramidSpec spec;
    spec.nodes = {{"a", 8, 16}, {"b", 16, 16}};
    spec.edges = {{"a", "b", EdgeKind::kLateral}};
    spec.input_height = 64;
    spec.input_width = 64;
    CHECK_THROWS_AS(drfpn_shapes(spec), ShapeError);
  }
  SUBCASE("top-down edge that is not a 2x upsample") {
    PyramidSpec spec;
    spec.nodes = {{"a", 32, 16}, {"b", 8, 16}};
    spec.edges = {{"a", "b", EdgeKind::kTopDown}};
    spec.input_height = 64;
    spec.input_width = 64;
    CHECK_THROWS_AS(drfpn_shapes(spec), ShapeError);
  }
  SUBCASE("auxiliary edge with a non-power-of-two ratio") {
    PyramidSpec spec;
    spec.nodes = {{"a", 8, 16}, {"b", 24, 16}};
    spec.edges = {{"a", "b", EdgeKind::kAuxiliary}};
    spec.input_height = 96;
    spec.input_width = 96;
    CHECK_THROWS_AS(drfpn_shapes(spec), ShapeError);
  }
  SUBCASE("indivisible input resolution surfaces as an illegal fusion") {
    // 90/32 truncates to 2, so the upsampled top-down path carries 4 rows
    // into a level that expects 90/16 = 5
    PyramidSpec spec = PyramidSpec::drfpn(90, 96);
    CHECK_THROWS_AS(drfpn_shapes(spec), ShapeError);
  }
}

TEST_CASE("unknown nodes and duplicates are configuration errors") {
  PyramidSpec spec;
  spec.nodes = {{"a", 8, 16}};
  spec.edges = {{"a", "zz", EdgeKind::kLateral}};
  CHECK_THROWS_AS(drfpn_shapes(spec), ConfigError);

  PyramidSpec dup;
  dup.nodes = {{"a", 8, 16}, {"a", 8, 16}};
  CHECK_THROWS_AS(drfpn_shapes(dup), ConfigError);
}
