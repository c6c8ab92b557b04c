#include "driftnav/eval/metrics.hpp"

#include <cmath>
#include <vector>

namespace driftnav::eval {

DriftMetrics compute_drift(std::span<const Pose2D> est, std::span<const Pose2D> gt) {
  if (est.size() != gt.size()) throw LengthMismatch(est.size(), gt.size());
  if (est.empty()) throw std::invalid_argument("empty trajectory");
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) sum += (est[i].position() - gt[i].position()).norm();
  DriftMetrics m;
  m.average_drift = sum / static_cast<double>(est.size());
  m.final_drift = (est.back().position() - gt.back().position()).norm();
  m.rotational_offset = std::abs(wrap_angle(est.back().yaw - gt.back().yaw));
  return m;
}

std::string_view to_string(Arm arm) noexcept {
  switch (arm) {
    case Arm::Ladfn: return "ladfn";
    case Arm::LadfnFiltered: return "ladfn+f";
    case Arm::Vanilla: return "vanilla";
    case Arm::VanillaFiltered: return "vanilla+f";
  }
  return "unknown";
}

Arm parse_arm(std::string_view name) {
  for (Arm a : kAllArms)
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown method arm: " + std::string(name));
}

TrajectoryReport compute_report(std::span<const Pose2D> est, std::span<const Pose2D> gt) {
  TrajectoryReport r;
  r.metrics = compute_drift(est, gt);
  return r;
}

TrajectoryReport report_run(const mdp::EvalEnvironment& env, Arm arm) {
  std::vector<Pose2D> est, gt;
  est.reserve(env.samples().size());
  gt.reserve(env.samples().size());
  for (const auto& s : env.samples()) {
    est.push_back(s.estimate);
    gt.push_back(s.truth);
  }
  TrajectoryReport r = compute_report(est, gt);
  r.scenario = env.scenario().name;
  r.arm = arm;
  r.lidar_range = env.config().lidar.max_range;
  r.seed = env.config().seed;
  r.collided = env.status() == mdp::EvalStatus::Collision;
  r.lane_breach = env.status() == mdp::EvalStatus::LaneBreach;
  r.goal_reached = env.status() == mdp::EvalStatus::Goal;
  r.outcome = std::string(mdp::to_string(env.status()));
  r.duration = env.time();
  r.distance = env.progress();
  if (r.collided && r.distance < kEarlyCollisionFraction * env.scenario().road.length) r.metrics.reset();
  return r;
}

}  // namespace driftnav::eval
