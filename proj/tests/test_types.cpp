#include <doctest.h>

#include "streambench/rng.hpp"
#include "streambench/scenario.hpp"
#include "streambench/types.hpp"

using namespace streambench;

namespace {

StreamScenario empty_scenario(int frames) {
  ScenarioSpec spec;
  spec.frame_count = frames;
  return generate_scenario(spec);
}

}  // namespace

TEST_CASE("make_window basic shapes") {
  const StreamScenario scenario = empty_scenario(20);
  CHECK(make_window(scenario, 10, {2, 1}) == std::vector<int>{10, 9, 8});
  CHECK(make_window(scenario, 0, {3, 2}) == std::vector<int>{0, 0, 0, 0});
  // direct arithmetic: t - i*step
  CHECK(make_window(scenario, 7, {2, 2}) == std::vector<int>{7, 5, 3});
  CHECK(make_window(scenario, 5, {0, 1}) == std::vector<int>{5});
}

TEST_CASE("make_window rejects out-of-range frames") {
  const StreamScenario scenario = empty_scenario(5);
  CHECK_THROWS_AS(make_window(scenario, 5, {1, 1}), RangeError);
  CHECK_THROWS_AS(make_window(scenario, -1, {1, 1}), RangeError);
  CHECK_THROWS_AS(make_window(scenario, 2, {1, 0}), RangeError);
}

TEST_CASE("make_window always returns N+1 non-increasing indices") {
  const StreamScenario scenario = empty_scenario(40);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int t = static_cast<int>(rng.next_u64() % 40);
    const WindowSpec spec{static_cast<int>(rng.next_u64() % 6),
                          1 + static_cast<int>(rng.next_u64() % 3)};
    const auto window = make_window(scenario, t, spec);
    REQUIRE(window.size() == static_cast<std::size_t>(spec.n_support) + 1);
    CHECK(window.front() == t);
    for (std::size_t i = 1; i < window.size(); ++i) {
      CHECK(window[i] <= window[i - 1]);
      CHECK(window[i] >= 0);
    }
  }
}

TEST_CASE("bounding box corner/size round trip is exact") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = rng.next_uniform(-100.0, 100.0);
    const double y = rng.next_uniform(-100.0, 100.0);
    const double w = rng.next_uniform(0.0, 50.0);
    const double h = rng.next_uniform(0.0, 50.0);
    const BoundingBox box = BoundingBox::from_xywh(x, y, w, h);
    CHECK(box.x_min == x);
    CHECK(box.y_min == y);
    // corner form back to size form
    CHECK(box.width() == box.x_max - box.x_min);
    CHECK(box.height() == box.y_max - box.y_min);
    CHECK(BoundingBox::from_xywh(box.x_min, box.y_min, box.width(),
                                 box.height()) == box);
  }
}

TEST_CASE("timeline sort and validation") {
  ResultTimeline timeline;
  timeline.results.push_back({3, 1, {}, 0.30});
  timeline.results.push_back({1, 1, {}, 0.10});
  timeline.results.push_back({2, 1, {}, 0.20});
  timeline.sort();
  CHECK(timeline.results[0].source_frame == 1);
  CHECK(timeline.results[2].source_frame == 3);
  timeline.validate();

  ResultTimeline bad;
  bad.results.push_back({0, 0, {}, 0.0});
  CHECK_THROWS_AS(bad.validate(), InvariantError);

  ResultTimeline bad_score;
  bad_score.results.push_back(
      {0, 1, {{BoundingBox{0, 0, 1, 1}, 0, 1.5}}, 0.0});
  CHECK_THROWS_AS(bad_score.validate(), InvariantError);
}

TEST_CASE("scenario validation catches gaps and bad categories") {
  StreamScenario scenario = empty_scenario(3);
  scenario.frames[1].frame_index = 5;
  CHECK_THROWS_AS(scenario.validate(), InvariantError);

  StreamScenario scenario2 = empty_scenario(3);
  scenario2.categories = {{1, "car"}};
  scenario2.frames[0].objects.push_back(
      {BoundingBox{0, 0, 10, 10}, 99, 100.0, false});
  CHECK_THROWS_AS(scenario2.validate(), InvariantError);
}
