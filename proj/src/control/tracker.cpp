#include "driftnav/control/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace driftnav::control {

namespace {

// Path samples continued straight past the end so the front axle, which
// leads the reference point by a wheelbase, always has a target ahead.
std::vector<PathSample> extended_samples(const SplinePath& path, double extension) {
  std::vector<PathSample> out = path.samples();
  const PathSample end = out.back();
  const Vec2 dir(std::cos(end.heading), std::sin(end.heading));
  const auto extra = static_cast<int>(std::ceil(extension / SplinePath::kResolution));
  for (int k = 1; k <= extra; ++k) {
    const double ds = k * SplinePath::kResolution;
    out.push_back({end.s + ds, end.x + ds * dir.x(), end.y + ds * dir.y(), end.heading, 0.0});
  }
  return out;
}

bool passed_end(const SplinePath& path, const Pose2D& pose) {
  const PathSample& end = path.samples().back();
  const Vec2 dir(std::cos(end.heading), std::sin(end.heading));
  return (pose.position() - Vec2(end.x, end.y)).dot(dir) >= 0.0;
}

}  // namespace

TrackResult track_path(VehicleState& vehicle, const SplinePath& path, double target_speed, const TrackHooks& hooks,
                       const TrackConfig& config) {
  TrackResult result;
  auto believed_pose = [&] { return hooks.pose_for_control ? hooks.pose_for_control(vehicle) : vehicle.pose; };
  if (path.length() < SplinePath::kResolution || passed_end(path, believed_pose())) {
    result.completed = true;
    return result;
  }

  const auto samples = extended_samples(path, vehicle.wheelbase + 5.0);
  const double dt = 1.0 / config.control_rate;
  const double budget = config.timeout_factor * path.length() / std::max(target_speed, 0.5) + 10.0;
  double t = 0.0;
  while (t < budget) {
    const Pose2D believed = believed_pose();
    if (passed_end(path, believed)) {
      result.completed = true;
      break;
    }
    const StanleyTerms terms = stanley(vehicle, believed, samples, config.gain);
    if (std::abs(terms.cross_track) > config.divergence_limit) throw TrackingDiverged(terms.cross_track);

    const double steer = terms.steer;
    vehicle.speed = approach_speed(vehicle.speed, target_speed, vehicle.max_accel, dt);
    vehicle.pose = integrate_bicycle(vehicle.pose, vehicle.speed, steer, vehicle.wheelbase, dt);
    t += dt;
    result.samples.push_back({t, vehicle.pose, believed, steer, vehicle.speed});
    if (hooks.on_tick && hooks.on_tick(dt, steer, vehicle) == TickStatus::Stop) {
      result.stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace driftnav::control
