#include "driftnav/odometry/odometry.hpp"

#include <ostream>

namespace driftnav::odometry {

namespace {

lidar::LidarScan prepare(const lidar::LidarScan& scan, Filtering filtering) {
  return filtering == Filtering::On ? lidar::filter_dynamic(scan) : scan;
}

Pose2D scaled(const Pose2D& rate, double dt) { return Pose2D::make(rate.x * dt, rate.y * dt, rate.yaw * dt); }

}  // namespace

OdometryEstimate ScanOdometry::initialize(const Pose2D& start_pose, const lidar::LidarScan& scan,
                                          Filtering filtering, const Pose2D& initial_rate) {
  prev_ = prepare(scan, filtering);
  pose_est_ = start_pose;
  velocity_ = initial_rate;
  step_ = 0;
  return {pose_est_, scan.sensor_pose, step_, false};
}

OdometryEstimate ScanOdometry::update(const lidar::LidarScan& scan, double dt, Filtering filtering,
                                      const std::optional<Pose2D>& motion_prior) {
  lidar::LidarScan cur = prepare(scan, filtering);
  const Pose2D guess = motion_prior ? *motion_prior : scaled(velocity_, dt);
  Pose2D rel = guess;
  bool degenerate = false;
  try {
    rel = match_scans(*prev_, cur, guess, icp_).transform;
  } catch (const DegenerateScan&) {
    degenerate = true;
  }
  pose_est_ = pose_est_.compose(rel);
  if (dt > 0.0) velocity_ = scaled(rel, 1.0 / dt);
  prev_ = std::move(cur);
  ++step_;
  return {pose_est_, scan.sensor_pose, step_, degenerate};
}

void write_pose_log(std::ostream& out, std::span<const OdometryEstimate> log) {
  out << "step,x_est,y_est,yaw_est,x_gt,y_gt,yaw_gt\n";
  out.precision(17);
  for (const auto& e : log)
    out << e.step_index << ',' << e.pose_est.x << ',' << e.pose_est.y << ',' << e.pose_est.yaw << ','
        << e.pose_gt.x << ',' << e.pose_gt.y << ',' << e.pose_gt.yaw << '\n';
}

}  // namespace driftnav::odometry
