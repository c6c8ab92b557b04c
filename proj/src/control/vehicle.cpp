#include "driftnav/control/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace driftnav::control {

Pose2D integrate_bicycle(const Pose2D& pose, double speed, double steer, double wheelbase, double dt) {
  const double yaw_rate = speed * std::tan(steer) / wheelbase;
  const double dyaw = yaw_rate * dt;
  if (std::abs(dyaw) < 1e-9) {
    return Pose2D::make(pose.x + speed * dt * std::cos(pose.yaw + 0.5 * dyaw),
                        pose.y + speed * dt * std::sin(pose.yaw + 0.5 * dyaw), pose.yaw + dyaw);
  }
  const double radius = speed / yaw_rate;
  return Pose2D::make(pose.x + radius * (std::sin(pose.yaw + dyaw) - std::sin(pose.yaw)),
                      pose.y - radius * (std::cos(pose.yaw + dyaw) - std::cos(pose.yaw)), pose.yaw + dyaw);
}

double approach_speed(double speed, double target, double max_accel, double dt) {
  return speed + std::clamp(target - speed, -max_accel * dt, max_accel * dt);
}

}  // namespace driftnav::control
