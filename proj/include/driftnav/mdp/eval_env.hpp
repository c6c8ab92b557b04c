#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "driftnav/control/tracker.hpp"
#include "driftnav/lidar/lidar.hpp"
#include "driftnav/mdp/train_env.hpp"
#include "driftnav/odometry/odometry.hpp"
#include "driftnav/scene/scenario.hpp"

namespace driftnav::mdp {

struct EvalConfig {
  lidar::LidarConfig lidar;
  odometry::Filtering filtering{odometry::Filtering::Off};
  std::uint64_t seed{0};
  double perception_rate{2.0};  // Hz; must divide the control rate
  control::TrackConfig track;
  RewardConfig reward;
  double initial_speed{3.0};
  double min_mean_speed{0.5};  // the run times out below this average
  double time_margin{60.0};    // seconds on top of length / min_mean_speed
  void validate() const;
};

enum class EvalStatus { Running, Goal, Collision, LaneBreach, Diverged, Timeout };
std::string_view to_string(EvalStatus status) noexcept;

/// One control tick. t = 0 is the start pose.
struct EvalSample {
  double t{0.0};
  Pose2D truth;
  Pose2D estimate;
  double steer{0.0};
  double speed{0.0};
};

/// Full closed-loop simulator. The controller sees the odometry estimate,
/// dead-reckoned from the applied commands between scans. Collisions and
/// lane breaches are judged on ground truth; the goal on the estimate.
class EvalEnvironment {
 public:
  EvalEnvironment(scene::Scenario scenario, EvalConfig config);

  /// Observation in the RL frame rebased so that x_e = 0. Traffic positions
  /// are the true relative positions seen from the estimated pose.
  [[nodiscard]] StateVector observe() const;

  /// Drives along a world-frame path until its end or a terminal event.
  void execute(const control::SplinePath& path, double target_speed);

  /// Single-waypoint step: the ego tracks a straight segment to (a_x, a_y)
  /// relative to the estimate at a_x / 1 s. Throws StepAfterDone.
  StepResult step(const Action& action);

  /// RL-frame waypoint (rebased x) to world coordinates.
  [[nodiscard]] Vec2 to_world(double x_rl, double y_rl) const { return {estimate_.x + x_rl, y_rl}; }

  /// Ends the run with a failure status (used by drivers that stall).
  void abort(EvalStatus status) noexcept {
    if (status_ == EvalStatus::Running) status_ = status;
  }

  [[nodiscard]] bool done() const noexcept { return status_ != EvalStatus::Running; }
  [[nodiscard]] EvalStatus status() const noexcept { return status_; }
  [[nodiscard]] const std::vector<EvalSample>& samples() const noexcept { return samples_; }
  [[nodiscard]] const std::vector<odometry::OdometryEstimate>& odometry_log() const noexcept { return odo_log_; }
  [[nodiscard]] const scene::Scenario& scenario() const noexcept { return scenario_; }
  [[nodiscard]] const EvalConfig& config() const noexcept { return config_; }
  [[nodiscard]] const control::VehicleState& vehicle() const noexcept { return vehicle_; }
  [[nodiscard]] const Pose2D& estimate() const noexcept { return estimate_; }
  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] double y_c_norm() const noexcept { return y_c_norm_; }
  /// Distance travelled along X by the true pose since the start.
  [[nodiscard]] double progress() const noexcept { return vehicle_.pose.x - scenario_.ego_start.x; }

 private:
  control::TickStatus tick(double dt, double steer);
  void perceive();
  void judge();

  scene::Scenario scenario_;
  EvalConfig config_;
  lidar::World world_;
  scene::TrafficState traffic_;
  odometry::ScanOdometry odometry_;
  control::VehicleState vehicle_;
  Pose2D estimate_;
  double y_c_norm_{0.0};
  double t_{0.0};
  long ticks_{0};
  int ticks_per_scan_{10};
  int scan_index_{0};
  double time_limit_{0.0};
  EvalStatus status_{EvalStatus::Running};
  std::vector<EvalSample> samples_;
  std::vector<odometry::OdometryEstimate> odo_log_;
};

/// Noise seed of the k-th scan of a run.
std::uint64_t scan_seed(std::uint64_t run_seed, int scan_index) noexcept;

}  // namespace driftnav::mdp
