#pragma once

#include <vector>

#include "driftnav/scene/scenario.hpp"

namespace driftnav::scene {

struct TrafficAgent {
  TrafficVehicle vehicle;
  bool present{true};
};

using TrafficState = std::vector<TrafficAgent>;

TrafficState initial_traffic(const Scenario& scenario);

/// Constant-velocity advance along +X. Agents whose x passes road_length
/// are marked absent and stop moving. dt must be positive.
TrafficState advance_traffic(const TrafficState& traffic, double road_length, double dt);

/// A static world point sampled from a feature region.
struct FeaturePoint {
  Vec2 position;
  int region{0};
};

/// ceil(arc_length * density) points per region, centered in equal arc
/// intervals so the sample set does not depend on polyline direction.
std::vector<FeaturePoint> rasterize_features(const Scenario& scenario);
std::vector<FeaturePoint> rasterize_region(const FeatureRegion& region, int region_index = 0);

}  // namespace driftnav::scene
