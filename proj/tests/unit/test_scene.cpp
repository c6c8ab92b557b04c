#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "driftnav/core/error.hpp"
#include "driftnav/scene/scenario.hpp"
#include "driftnav/scene/world.hpp"

using namespace driftnav;

namespace {

scene::Scenario small_scenario() {
  scene::Scenario s;
  s.name = "unit";
  s.road = {120.0, -6.0, 6.0};
  s.features.push_back({{Vec2(0, -9), Vec2(50, -9)}, 4.0});
  s.features.push_back({{Vec2(10, 9), Vec2(12, 9), Vec2(12, 11)}, 10.0});
  s.traffic.push_back({1, Pose2D{20, 3.5, 0}, 3.5, 1.5});
  s.ego_start = Pose2D{0, -1, 0};
  s.lidar_range = 45;
  s.seed = 3;
  return s;
}

std::vector<Vec2> positions(const std::vector<scene::FeaturePoint>& pts) {
  std::vector<Vec2> out;
  for (const auto& p : pts) out.push_back(p.position);
  std::sort(out.begin(), out.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  return out;
}

}  // namespace

TEST_CASE("scenario serialization round-trips") {
  const auto s = small_scenario();
  const auto back = scene::parse_scenario(scene::serialize_scenario(s));
  CHECK(back.name == s.name);
  CHECK(back.road.length == s.road.length);
  CHECK(back.road.edge_l == s.road.edge_l);
  CHECK(back.features.size() == 2);
  CHECK(back.features[1].polyline[2] == s.features[1].polyline[2]);
  CHECK(back.features[1].point_density == 10.0);
  REQUIRE(back.traffic.size() == 1);
  CHECK(back.traffic[0].pose == s.traffic[0].pose);
  CHECK(back.traffic[0].speed == 3.5);
  CHECK(back.ego_start == s.ego_start);
  CHECK(back.seed == 3);
  CHECK(back.lidar_range == 45);
}

TEST_CASE("bundled scenarios load and validate") {
  const std::filesystem::path dir = DRIFTNAV_SCENARIO_DIR;
  int count = 0, dynamic = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    const auto s = scene::load_scenario(e.path());
    CHECK(s.road.length >= 100.0);
    CHECK(s.road.length <= 500.0);
    CHECK(s.traffic.size() <= 2);
    dynamic += !s.is_static();
    ++count;
  }
  CHECK(count == 5);
  CHECK(dynamic == 3);
}

TEST_CASE("validation names the offending field") {
  auto s = small_scenario();
  s.road.edge_l = 6.0;
  try {
    scene::validate(s);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "edge_l");
  }

  s = small_scenario();
  s.traffic[0].pose.y = 7.0;
  CHECK_THROWS_AS(scene::validate(s), ValidationError);

  s = small_scenario();
  s.features[0].point_density = 0.0;
  CHECK_THROWS_AS(scene::validate(s), ValidationError);

  s = small_scenario();
  s.traffic.assign(3, s.traffic[0]);
  CHECK_THROWS_AS(scene::validate(s), ValidationError);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(scene::parse_scenario("{"), ParseError);
  CHECK_THROWS_AS(scene::parse_scenario(R"({"schema_version": 2})"), ParseError);
  auto text = scene::serialize_scenario(small_scenario());
  text.replace(text.find("\"road\""), 6, "\"raod\"");
  CHECK_THROWS_AS(scene::parse_scenario(text), ParseError);
  CHECK_THROWS_AS(scene::load_scenario("/nonexistent/scene.json"), IoError);
}

TEST_CASE("rasterization count and spacing") {
  const scene::FeatureRegion wall{{Vec2(0, 0), Vec2(10, 0)}, 3.0};
  const auto pts = scene::rasterize_region(wall);
  REQUIRE(pts.size() == 30);
  CHECK(pts.front().position.x() == doctest::Approx(10.0 / 60.0));
  CHECK(pts.back().position.x() == doctest::Approx(10.0 - 10.0 / 60.0));

  const scene::FeatureRegion odd{{Vec2(0, 0), Vec2(1.05, 0)}, 2.0};
  CHECK(scene::rasterize_region(odd).size() == 3);  // ceil(2.1)
}

TEST_CASE("rasterization is invariant under polyline reversal") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    scene::FeatureRegion region;
    const int n = 2 + trial % 5;
    for (int i = 0; i < n; ++i) region.polyline.emplace_back(u(rng), u(rng));
    region.point_density = 1.0 + trial % 7;
    scene::FeatureRegion reversed = region;
    std::reverse(reversed.polyline.begin(), reversed.polyline.end());
    const auto a = positions(scene::rasterize_region(region));
    const auto b = positions(scene::rasterize_region(reversed));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() < 1e-9);
  }
}

TEST_CASE("traffic advance composes exactly on dyadic values") {
  scene::TrafficState t{{{1, Pose2D{1.5, 3.5, 0}, 0.25, 1.5}, true}, {{2, Pose2D{10.0, -3.5, 0}, 4.0, 1.5}, true}};
  const auto once = scene::advance_traffic(t, 100.0, 1.5);
  const auto twice = scene::advance_traffic(scene::advance_traffic(t, 100.0, 0.5), 100.0, 1.0);
  CHECK(once[0].vehicle.pose.x == 1.875);
  CHECK(once[1].vehicle.pose.x == 16.0);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(once[i].vehicle.pose == twice[i].vehicle.pose);
  CHECK(once[0].vehicle.pose.y == 3.5);
}

TEST_CASE("traffic past the road end becomes absent") {
  scene::TrafficState t{{{1, Pose2D{99.0, 0, 0}, 4.0, 1.5}, true}};
  const auto after = scene::advance_traffic(t, 100.0, 0.5);
  CHECK_FALSE(after[0].present);
  const auto later = scene::advance_traffic(after, 100.0, 0.5);
  CHECK(later[0].vehicle.pose.x == after[0].vehicle.pose.x);
  CHECK_THROWS(scene::advance_traffic(t, 100.0, 0.0));
}
