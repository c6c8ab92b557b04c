#pragma once

#include "driftnav/core/pose.hpp"

namespace driftnav::control {

/// Kinematic bicycle referenced at the rear axle.
struct VehicleState {
  Pose2D pose;
  double speed{0.0};
  double wheelbase{2.5};
  double max_steer{0.6};
  double max_accel{1.5};

  [[nodiscard]] Vec2 front_axle(const Pose2D& p) const noexcept {
    return p.position() + wheelbase * Vec2(std::cos(p.yaw), std::sin(p.yaw));
  }
};

/// Exact integration of x' = v cos(yaw), y' = v sin(yaw), yaw' = v tan(steer) / L
/// with steer and v held over dt.
Pose2D integrate_bicycle(const Pose2D& pose, double speed, double steer, double wheelbase, double dt);

/// Speed after one tick of an acceleration-limited speed controller.
double approach_speed(double speed, double target, double max_accel, double dt);

}  // namespace driftnav::control
