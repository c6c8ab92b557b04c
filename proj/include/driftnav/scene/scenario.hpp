#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "driftnav/core/pose.hpp"

namespace driftnav::scene {

inline constexpr int kScenarioSchemaVersion = 1;

/// Straight road corridor along +X. The goal line sits at x = length.
struct RoadGeometry {
  double length{100.0};
  double edge_l{-6.0};
  double edge_r{6.0};

  [[nodiscard]] double width() const noexcept { return edge_r - edge_l; }
  [[nodiscard]] double center() const noexcept { return 0.5 * (edge_l + edge_r); }
  [[nodiscard]] bool contains_lateral(double y) const noexcept {
    return y >= edge_l && y <= edge_r;
  }
};

/// Static structure sampled into points (facades, barriers, poles).
struct FeatureRegion {
  std::vector<Vec2> polyline;
  double point_density{10.0};  // points per meter of arc length

  [[nodiscard]] double arc_length() const noexcept;
};

struct TrafficVehicle {
  int id{0};
  Pose2D pose;
  double speed{0.0};  // m/s along +X
  double footprint_half_extent{1.5};
};

struct Scenario {
  std::string name;
  RoadGeometry road;
  std::vector<FeatureRegion> features;
  std::vector<TrafficVehicle> traffic;
  Pose2D ego_start;
  double lidar_range{50.0};
  std::uint64_t seed{0};
  int max_traffic_slots{2};

  [[nodiscard]] bool is_static() const noexcept { return traffic.empty(); }
};

/// Checks every Scenario invariant. Throws ValidationError naming the field.
void validate(const Scenario& scenario);

/// Reads a scenario document (JSON, see docs/scenario_format.md).
/// Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace driftnav::scene
