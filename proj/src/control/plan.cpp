#include "driftnav/control/plan.hpp"

#include <algorithm>
#include <stdexcept>

#include "driftnav/core/error.hpp"

namespace driftnav::control {

namespace {
constexpr int kMaxStalls = 3;  // consecutive segments without a control tick
}  // namespace

std::vector<Vec2> unroll_waypoints(const ppo::ActorCritic& net, const mdp::StateVector& state, int n,
                                  double collision_radius) {
  if (n < 1) throw std::invalid_argument("unroll depth must be at least 1");
  std::vector<Vec2> out{Vec2(state.x_e, state.y_e)};
  mdp::StateVector cur = state;
  for (int i = 0; i < n; ++i) {
    const auto action = mdp::Action::from_index(ppo::greedy_action(net, cur));
    mdp::StateVector next = mdp::teleport(cur, action, mdp::TrainingEnvironment::kStepSeconds);
    const bool terminal = mdp::collides(next, collision_radius) || mdp::out_of_road(next);
    if (terminal && i > 0) break;
    out.emplace_back(next.x_e, next.y_e);
    if (terminal) break;
    cur = std::move(next);
  }
  return out;
}

void PlanConfig::validate() const {
  if (unroll < 1) throw ValidationError("unroll", "must be at least 1");
  if (!(edge_margin >= 0.0)) throw ValidationError("edge_margin", "must be non-negative");
  if (!(max_lateral_slope > 0.0)) throw ValidationError("max_lateral_slope", "must be positive");
}

std::vector<Vec2> shape_waypoints(const std::vector<Vec2>& waypoints, double edge_l, double edge_r,
                                  const PlanConfig& config) {
  std::vector<Vec2> out = waypoints;
  double lo = edge_l + config.edge_margin;
  double hi = edge_r - config.edge_margin;
  if (lo > hi) lo = hi = 0.5 * (edge_l + edge_r);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double reach = config.max_lateral_slope * (out[i].x() - out[i - 1].x());
    const double y = std::clamp(out[i].y(), lo, hi);
    out[i].y() = std::clamp(y, out[i - 1].y() - reach, out[i - 1].y() + reach);
  }
  return out;
}

PlanResult plan_and_track(const ppo::ActorCritic& net, mdp::EvalEnvironment& env, const PlanConfig& config) {
  config.validate();
  PlanResult result;
  int stalls = 0;
  while (!env.done()) {
    const mdp::StateVector state = env.observe();
    const auto rl = shape_waypoints(
        unroll_waypoints(net, state, config.unroll, env.config().reward.collision_radius), state.edge_l,
        state.edge_r, config);
    std::vector<Vec2> world;
    world.reserve(rl.size());
    for (const auto& p : rl) world.push_back(env.to_world(p.x(), p.y()));
    const SplinePath path = world.size() >= 3 ? fit_spline(world) : SplinePath(world);
    const double steps = static_cast<double>(world.size() - 1);
    const std::size_t before = env.samples().size();
    env.execute(path, path.length() / (steps * mdp::TrainingEnvironment::kStepSeconds));
    ++result.segments;
    stalls = env.samples().size() == before ? stalls + 1 : 0;
    if (stalls >= kMaxStalls) env.abort(mdp::EvalStatus::Timeout);
  }
  result.status = env.status();
  return result;
}

PlanResult track_centerline(mdp::EvalEnvironment& env, double speed) {
  const auto& sc = env.scenario();
  const double y = sc.road.center();
  const SplinePath path({Vec2(sc.ego_start.x, y), Vec2(sc.road.length + 20.0, y)});
  PlanResult result;
  int stalls = 0;
  while (!env.done()) {
    const std::size_t before = env.samples().size();
    env.execute(path, speed);
    ++result.segments;
    stalls = env.samples().size() == before ? stalls + 1 : 0;
    if (stalls >= kMaxStalls) env.abort(mdp::EvalStatus::Timeout);
  }
  result.status = env.status();
  return result;
}

}  // namespace driftnav::control
