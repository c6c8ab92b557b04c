#include "driftnav/mdp/eval_env.hpp"

#include <algorithm>
#include <cmath>

#include "driftnav/core/error.hpp"

namespace driftnav::mdp {

void EvalConfig::validate() const {
  lidar.validate();
  reward.validate();
  if (!(perception_rate > 0.0)) throw ValidationError("perception_rate", "must be positive");
  if (!(track.control_rate > 0.0)) throw ValidationError("control_rate", "must be positive");
  const double ratio = track.control_rate / perception_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
    throw ValidationError("perception_rate", "must divide the control rate");
  if (!(initial_speed >= 0.0)) throw ValidationError("initial_speed", "must be non-negative");
  if (!(min_mean_speed > 0.0)) throw ValidationError("min_mean_speed", "must be positive");
}

std::string_view to_string(EvalStatus status) noexcept {
  switch (status) {
    case EvalStatus::Running: return "running";
    case EvalStatus::Goal: return "goal";
    case EvalStatus::Collision: return "collision";
    case EvalStatus::LaneBreach: return "lane_breach";
    case EvalStatus::Diverged: return "diverged";
    case EvalStatus::Timeout: return "timeout";
  }
  return "unknown";
}

std::uint64_t scan_seed(std::uint64_t run_seed, int scan_index) noexcept {
  // splitmix64 finalizer over the pair
  std::uint64_t z = run_seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(scan_index) + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EvalEnvironment::EvalEnvironment(scene::Scenario scenario, EvalConfig config)
    : scenario_(std::move(scenario)), config_(std::move(config)) {
  scene::validate(scenario_);
  config_.validate();
  ticks_per_scan_ = static_cast<int>(std::lround(config_.track.control_rate / config_.perception_rate));
  traffic_ = scene::initial_traffic(scenario_);
  world_ = lidar::World(scene::rasterize_features(scenario_), traffic_);
  vehicle_.pose = scenario_.ego_start;
  vehicle_.speed = config_.initial_speed;
  time_limit_ = scenario_.road.length / config_.min_mean_speed + config_.time_margin;

  const lidar::LidarScan scan = lidar::cast_scan(world_, vehicle_.pose, config_.lidar, scan_seed(config_.seed, 0), 0);
  odo_log_.push_back(odometry_.initialize(scenario_.ego_start, scan, config_.filtering,
                                          Pose2D{config_.initial_speed, 0.0, 0.0}));
  estimate_ = odometry_.pose_est();
  const auto features = odometry::extract_edge_features(
      config_.filtering == odometry::Filtering::On ? lidar::filter_dynamic(scan) : scan);
  if (!features.points.empty())
    y_c_norm_ = normalize_centroid(odometry::compute_feature_centroid_y(features, estimate_), scenario_.road.edge_l,
                                   scenario_.road.edge_r);
  samples_.push_back({0.0, vehicle_.pose, estimate_, 0.0, vehicle_.speed});
  judge();
}

StateVector EvalEnvironment::observe() const {
  std::vector<TrackedVehicle> tracked;
  for (const auto& agent : traffic_) {
    if (!agent.present) continue;
    const Vec2 rel = vehicle_.pose.inverse_transform(agent.vehicle.pose.position());
    const Vec2 seen = estimate_.transform(rel);
    tracked.push_back({Vec2(seen.x() - estimate_.x, seen.y()), agent.vehicle.speed});
  }
  const auto& road = scenario_.road;
  StateVector s = build_state(Pose2D{0.0, estimate_.y, estimate_.yaw}, denormalize_centroid(y_c_norm_, road.edge_l, road.edge_r),
                              road.edge_l, road.edge_r, tracked, scenario_.max_traffic_slots);
  s.y_c_norm = y_c_norm_;  // held value, not re-derived through the clip
  return s;
}

void EvalEnvironment::perceive() {
  ++scan_index_;
  world_.set_traffic(traffic_);
  const lidar::LidarScan scan =
      lidar::cast_scan(world_, vehicle_.pose, config_.lidar, scan_seed(config_.seed, scan_index_), scan_index_);
  const double dt = ticks_per_scan_ / config_.track.control_rate;
  odo_log_.push_back(odometry_.update(scan, dt, config_.filtering, Pose2D::between(odometry_.pose_est(), estimate_)));
  estimate_ = odometry_.pose_est();
  const auto features = odometry::extract_edge_features(
      config_.filtering == odometry::Filtering::On ? lidar::filter_dynamic(scan) : scan);
  if (!features.points.empty())
    y_c_norm_ = normalize_centroid(odometry::compute_feature_centroid_y(features, estimate_), scenario_.road.edge_l,
                                   scenario_.road.edge_r);
}

void EvalEnvironment::judge() {
  if (status_ != EvalStatus::Running) return;
  const Vec2 ego = vehicle_.pose.position();
  for (const auto& agent : traffic_) {
    if (agent.present && (agent.vehicle.pose.position() - ego).norm() < config_.reward.collision_radius) {
      status_ = EvalStatus::Collision;
      return;
    }
  }
  if (!scenario_.road.contains_lateral(ego.y())) {
    status_ = EvalStatus::LaneBreach;
    return;
  }
  if (estimate_.x >= scenario_.road.length) {
    status_ = EvalStatus::Goal;
    return;
  }
  if (t_ > time_limit_) status_ = EvalStatus::Timeout;
}

control::TickStatus EvalEnvironment::tick(double dt, double steer) {
  t_ += dt;
  ++ticks_;
  traffic_ = scene::advance_traffic(traffic_, scenario_.road.length, dt);
  estimate_ = control::integrate_bicycle(estimate_, vehicle_.speed, steer, vehicle_.wheelbase, dt);
  if (ticks_ % ticks_per_scan_ == 0) perceive();
  samples_.push_back({t_, vehicle_.pose, estimate_, steer, vehicle_.speed});
  judge();
  return done() ? control::TickStatus::Stop : control::TickStatus::Continue;
}

void EvalEnvironment::execute(const control::SplinePath& path, double target_speed) {
  if (done()) throw StepAfterDone();
  control::TrackHooks hooks;
  hooks.pose_for_control = [this](const control::VehicleState&) { return estimate_; };
  hooks.on_tick = [this](double dt, double steer, const control::VehicleState&) { return tick(dt, steer); };
  try {
    const auto result = control::track_path(vehicle_, path, target_speed, hooks, config_.track);
    if (!result.completed && !result.stopped && !done()) status_ = EvalStatus::Timeout;
  } catch (const control::TrackingDiverged&) {
    status_ = EvalStatus::Diverged;
  }
}

StepResult EvalEnvironment::step(const Action& action) {
  if (done()) throw StepAfterDone();
  const StateVector before = observe();
  const std::vector<Vec2> waypoints{to_world(0.0, before.y_e), to_world(action.a_x, before.y_e + action.a_y)};
  execute(control::SplinePath(waypoints), action.a_x / TrainingEnvironment::kStepSeconds);
  StepResult out;
  out.state = observe();
  out.reward = reward(before, action, out.state, config_.reward);
  if (status_ == EvalStatus::Collision || status_ == EvalStatus::LaneBreach) {
    out.reward.collision = status_ == EvalStatus::Collision;
    out.reward.out_of_road = status_ == EvalStatus::LaneBreach;
    out.reward.G = -config_.reward.terminal_penalty;
    out.reward.F = 0.0;
    out.reward.T = 0.0;
    out.reward.total = out.reward.G;
  }
  out.done = done();
  return out;
}

}  // namespace driftnav::mdp
