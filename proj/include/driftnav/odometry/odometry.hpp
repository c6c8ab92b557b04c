#pragma once

#include <iosfwd>
#include <optional>
#include <span>

#include "driftnav/lidar/lidar.hpp"
#include "driftnav/odometry/features.hpp"
#include "driftnav/odometry/icp.hpp"

namespace driftnav::odometry {

struct OdometryEstimate {
  Pose2D pose_est;
  Pose2D pose_gt;  // evaluation only
  int step_index{0};
  bool degenerate{false};  // constant-velocity fallback was used
};

enum class Filtering { Off, On };

/// Scan-to-scan odometry. Each update composes the ICP relative transform
/// onto the running estimate, seeded with a constant-velocity prior.
class ScanOdometry {
 public:
  explicit ScanOdometry(IcpConfig icp = {}) : icp_(icp) {}

  /// Step 0: the estimate starts at the known start pose. initial_rate is
  /// the known body-frame motion per second at start (x, y, yaw rates).
  OdometryEstimate initialize(const Pose2D& start_pose, const lidar::LidarScan& scan, Filtering filtering,
                              const Pose2D& initial_rate = {});

  /// dt is the time since the previous scan. motion_prior, when given, is
  /// the expected relative motion (e.g. from wheel odometry) and replaces
  /// the constant-velocity guess.
  OdometryEstimate update(const lidar::LidarScan& scan, double dt, Filtering filtering,
                          const std::optional<Pose2D>& motion_prior = std::nullopt);

  [[nodiscard]] bool initialized() const noexcept { return prev_.has_value(); }
  [[nodiscard]] const Pose2D& pose_est() const noexcept { return pose_est_; }
  [[nodiscard]] const lidar::LidarScan& last_scan() const { return *prev_; }
  [[nodiscard]] int step_index() const noexcept { return step_; }

 private:
  IcpConfig icp_;
  std::optional<lidar::LidarScan> prev_;
  Pose2D pose_est_;
  Pose2D velocity_;  // last relative transform per second
  int step_{0};
};

/// step,x_est,y_est,yaw_est,x_gt,y_gt,yaw_gt
void write_pose_log(std::ostream& out, std::span<const OdometryEstimate> log);

}  // namespace driftnav::odometry
