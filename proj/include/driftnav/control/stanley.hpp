#pragma once

#include <span>

#include "driftnav/control/spline.hpp"
#include "driftnav/control/vehicle.hpp"

namespace driftnav::control {

struct StanleyTerms {
  double steer{0.0};         // clamped command
  double heading_error{0.0};
  double cross_track{0.0};   // > 0 when the path lies to the vehicle's left
  std::size_t nearest{0};    // index into path.samples()
};

/// delta = theta_e + atan(k e / v) at the sample nearest to the front axle,
/// clamped to +-max_steer. `pose` is the pose the controller believes.
/// Speeds below 0.1 m/s are treated as 0.1 m/s.
StanleyTerms stanley(const VehicleState& vehicle, const Pose2D& pose, std::span<const PathSample> samples,
                     double gain);
StanleyTerms stanley(const VehicleState& vehicle, const Pose2D& pose, const SplinePath& path, double gain);
double stanley_steer(const VehicleState& vehicle, const SplinePath& path, double gain);

}  // namespace driftnav::control
