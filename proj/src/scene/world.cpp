#include "driftnav/scene/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftnav::scene {

TrafficState initial_traffic(const Scenario& scenario) {
  TrafficState out;
  out.reserve(scenario.traffic.size());
  for (const auto& v : scenario.traffic) out.push_back({v, true});
  return out;
}

TrafficState advance_traffic(const TrafficState& traffic, double road_length, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance_traffic: dt must be positive");
  TrafficState out = traffic;
  for (auto& agent : out) {
    if (!agent.present) continue;
    agent.vehicle.pose.x += agent.vehicle.speed * dt;
    if (agent.vehicle.pose.x > road_length) agent.present = false;
  }
  return out;
}

std::vector<FeaturePoint> rasterize_region(const FeatureRegion& region, int region_index) {
  std::vector<FeaturePoint> out;
  const double total = region.arc_length();
  if (total <= 0.0) return out;
  const auto count = static_cast<std::size_t>(std::ceil(total * region.point_density));
  out.reserve(count);

  // Walk the polyline once; targets are increasing.
  std::size_t seg = 1;
  double seg_start = 0.0;
  double seg_len = (region.polyline[1] - region.polyline[0]).norm();
  for (std::size_t k = 0; k < count; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * total / static_cast<double>(count);
    while (s > seg_start + seg_len && seg + 1 < region.polyline.size()) {
      seg_start += seg_len;
      ++seg;
      seg_len = (region.polyline[seg] - region.polyline[seg - 1]).norm();
    }
    const Vec2& a = region.polyline[seg - 1];
    const Vec2& b = region.polyline[seg];
    const double t = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
    out.push_back({a + t * (b - a), region_index});
  }
  return out;
}

std::vector<FeaturePoint> rasterize_features(const Scenario& scenario) {
  std::vector<FeaturePoint> out;
  for (std::size_t i = 0; i < scenario.features.size(); ++i) {
    auto pts = rasterize_region(scenario.features[i], static_cast<int>(i));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

}  // namespace driftnav::scene
