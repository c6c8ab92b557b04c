#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "driftnav/control/stanley.hpp"

namespace driftnav::control {

class TrackingDiverged : public std::runtime_error {
 public:
  explicit TrackingDiverged(double error)
      : std::runtime_error("cross-track error exceeded limit: " + std::to_string(error)), error_(error) {}
  [[nodiscard]] double error() const noexcept { return error_; }

 private:
  double error_;
};

struct TrackConfig {
  double gain{0.5};
  double control_rate{20.0};  // Hz
  double divergence_limit{5.0};
  double timeout_factor{4.0};  // time budget as a multiple of length / target speed
};

struct TrackSample {
  double t{0.0};
  Pose2D truth;
  Pose2D believed;
  double steer{0.0};
  double speed{0.0};
};

enum class TickStatus { Continue, Stop };

/// Simulation hooks. pose_for_control returns what the controller believes
/// (defaults to ground truth); on_tick runs after every control tick with
/// the applied command and may stop tracking early.
struct TrackHooks {
  std::function<Pose2D(const VehicleState&)> pose_for_control;
  std::function<TickStatus(double dt, double steer, const VehicleState&)> on_tick;
};

struct TrackResult {
  std::vector<TrackSample> samples;
  bool completed{false};  // reached the end of the path
  bool stopped{false};    // a hook requested a stop
};

/// Drives the bicycle along the path until the front axle projects onto the
/// last resampled point. Throws TrackingDiverged.
TrackResult track_path(VehicleState& vehicle, const SplinePath& path, double target_speed,
                       const TrackHooks& hooks = {}, const TrackConfig& config = {});

}  // namespace driftnav::control
