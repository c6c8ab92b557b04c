#include "driftnav/control/stanley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace driftnav::control {

StanleyTerms stanley(const VehicleState& vehicle, const Pose2D& pose, const SplinePath& path, double gain) {
  return stanley(vehicle, pose, std::span<const PathSample>(path.samples()), gain);
}

StanleyTerms stanley(const VehicleState& vehicle, const Pose2D& pose, std::span<const PathSample> samples,
                     double gain) {
  const Vec2 front = vehicle.front_axle(pose);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = (Vec2(samples[i].x, samples[i].y) - front).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const PathSample& p = samples[best];
  const Vec2 left(-std::sin(p.heading), std::cos(p.heading));
  StanleyTerms out;
  out.nearest = best;
  out.heading_error = wrap_angle(p.heading - pose.yaw);
  out.cross_track = (Vec2(p.x, p.y) - front).dot(left);
  const double v = std::max(vehicle.speed, 0.1);
  const double raw = out.heading_error + std::atan(gain * out.cross_track / v);
  out.steer = std::clamp(raw, -vehicle.max_steer, vehicle.max_steer);
  return out;
}

double stanley_steer(const VehicleState& vehicle, const SplinePath& path, double gain) {
  return stanley(vehicle, vehicle.pose, path, gain).steer;
}

}  // namespace driftnav::control
