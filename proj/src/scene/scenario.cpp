#include "driftnav/scene/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftnav/core/error.hpp"

namespace driftnav::scene {

using nlohmann::json;

double FeatureRegion::arc_length() const noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += (polyline[i] - polyline[i - 1]).norm();
  return total;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

Pose2D read_pose(const json& v, const std::string& path) {
  const double yaw = v.contains("yaw") ? number(v, "yaw", path) : 0.0;
  return Pose2D::make(number(v, "x", path), number(v, "y", path), yaw);
}

Vec2 read_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(path + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

json write_pose(const Pose2D& p) { return json{{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}}; }

}  // namespace

void validate(const Scenario& s) {
  if (s.name.empty()) throw ValidationError("name", "must not be empty");
  if (!(s.road.length > 0.0)) throw ValidationError("road.length", "must be positive");
  if (!(s.road.edge_l < s.road.edge_r)) throw ValidationError("edge_l", "must be less than edge_r");
  for (std::size_t i = 0; i < s.features.size(); ++i) {
    const auto& f = s.features[i];
    const std::string field = "features[" + std::to_string(i) + "]";
    if (f.polyline.size() < 2) throw ValidationError(field + ".polyline", "needs at least 2 points");
    if (!(f.point_density > 0.0)) throw ValidationError(field + ".point_density", "must be positive");
  }
  if (s.max_traffic_slots < 0) throw ValidationError("max_traffic_slots", "must be non-negative");
  if (static_cast<int>(s.traffic.size()) > s.max_traffic_slots)
    throw ValidationError("traffic", "more vehicles than max_traffic_slots");
  for (std::size_t i = 0; i < s.traffic.size(); ++i) {
    const auto& t = s.traffic[i];
    const std::string field = "traffic[" + std::to_string(i) + "]";
    if (!(t.speed >= 0.0)) throw ValidationError(field + ".speed", "must be non-negative");
    if (!(t.footprint_half_extent > 0.0))
      throw ValidationError(field + ".footprint_half_extent", "must be positive");
    if (!s.road.contains_lateral(t.pose.y) || t.pose.x < 0.0 || t.pose.x > s.road.length)
      throw ValidationError(field + ".pose", "outside road limits");
  }
  if (s.ego_start.x != 0.0) throw ValidationError("ego_start.x", "must be 0");
  if (!s.road.contains_lateral(s.ego_start.y)) throw ValidationError("ego_start.y", "outside road limits");
  if (!(s.lidar_range > 0.0)) throw ValidationError("lidar_range", "must be positive");
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  const std::string root = "scenario";
  const json& version = require(doc, "schema_version", root);
  if (!version.is_number_integer() || version.get<int>() != kScenarioSchemaVersion)
    throw ParseError("schema_version: unsupported (expected " + std::to_string(kScenarioSchemaVersion) + ")");

  Scenario s;
  const json& name = require(doc, "name", root);
  if (!name.is_string()) throw ParseError("name: expected a string");
  s.name = name.get<std::string>();

  const json& road = require(doc, "road", root);
  s.road.length = number(road, "length", "road");
  s.road.edge_l = number(road, "edge_l", "road");
  s.road.edge_r = number(road, "edge_r", "road");

  if (doc.contains("features")) {
    const json& features = doc["features"];
    if (!features.is_array()) throw ParseError("features: expected an array");
    for (std::size_t i = 0; i < features.size(); ++i) {
      const std::string path = "features[" + std::to_string(i) + "]";
      FeatureRegion region;
      const json& poly = require(features[i], "polyline", path);
      if (!poly.is_array()) throw ParseError(path + ".polyline: expected an array");
      for (std::size_t k = 0; k < poly.size(); ++k)
        region.polyline.push_back(read_point(poly[k], path + ".polyline[" + std::to_string(k) + "]"));
      region.point_density = number(features[i], "point_density", path);
      s.features.push_back(std::move(region));
    }
  }

  if (doc.contains("max_traffic_slots")) {
    const json& slots = doc["max_traffic_slots"];
    if (!slots.is_number_integer()) throw ParseError("max_traffic_slots: expected an integer");
    s.max_traffic_slots = slots.get<int>();
  }

  if (doc.contains("traffic")) {
    const json& traffic = doc["traffic"];
    if (!traffic.is_array()) throw ParseError("traffic: expected an array");
    for (std::size_t i = 0; i < traffic.size(); ++i) {
      const std::string path = "traffic[" + std::to_string(i) + "]";
      TrafficVehicle t;
      const json& id = require(traffic[i], "id", path);
      if (!id.is_number_integer()) throw ParseError(path + ".id: expected an integer");
      t.id = id.get<int>();
      t.pose = read_pose(require(traffic[i], "pose", path), path + ".pose");
      t.speed = number(traffic[i], "speed", path);
      t.footprint_half_extent = number(traffic[i], "footprint_half_extent", path);
      s.traffic.push_back(t);
    }
  }

  s.ego_start = read_pose(require(doc, "ego_start", root), "ego_start");
  s.lidar_range = number(doc, "lidar_range", root);
  const json& seed = require(doc, "seed", root);
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ParseError("seed: expected an integer");
  s.seed = seed.get<std::uint64_t>();

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = s.name;
  doc["road"] = {{"length", s.road.length}, {"edge_l", s.road.edge_l}, {"edge_r", s.road.edge_r}};
  doc["features"] = json::array();
  for (const auto& f : s.features) {
    json poly = json::array();
    for (const auto& p : f.polyline) poly.push_back({p.x(), p.y()});
    doc["features"].push_back({{"polyline", poly}, {"point_density", f.point_density}});
  }
  doc["max_traffic_slots"] = s.max_traffic_slots;
  doc["traffic"] = json::array();
  for (const auto& t : s.traffic)
    doc["traffic"].push_back({{"id", t.id},
                              {"pose", write_pose(t.pose)},
                              {"speed", t.speed},
                              {"footprint_half_extent", t.footprint_half_extent}});
  doc["ego_start"] = write_pose(s.ego_start);
  doc["lidar_range"] = s.lidar_range;
  doc["seed"] = s.seed;
  return doc.dump(2);
}

}  // namespace driftnav::scene
