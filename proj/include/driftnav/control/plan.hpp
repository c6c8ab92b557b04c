#pragma once

#include <vector>

#include "driftnav/mdp/eval_env.hpp"
#include "driftnav/ppo/policy.hpp"

namespace driftnav::control {

/// RL-frame waypoints from a greedy unroll of the policy in the teleport
/// model, starting with the ego. The unroll stops after the first step whose
/// transition is terminal in the model; that waypoint is dropped unless it is
/// the only one.
std::vector<Vec2> unroll_waypoints(const ppo::ActorCritic& net, const mdp::StateVector& state, int n,
                                  double collision_radius = 3.0);

struct PlanConfig {
  int unroll{5};
  double edge_margin{1.0};        // m kept clear of each road edge
  double max_lateral_slope{0.5};  // |dy/dx| between consecutive waypoints
  void validate() const;
};

/// Kinematic feasibility pass over RL-frame waypoints (first point fixed):
/// each y is clamped into the road minus the margin, then into the slope
/// cone of its predecessor.
std::vector<Vec2> shape_waypoints(const std::vector<Vec2>& waypoints, double edge_l, double edge_r,
                                  const PlanConfig& config);

struct PlanResult {
  int segments{0};
  mdp::EvalStatus status{mdp::EvalStatus::Running};
};

/// Replans every segment: observe, unroll, shape, fit a spline (a straight
/// segment when the unroll has one step) and track it at
/// length / (steps * 1 s) until the environment reports goal or failure.
PlanResult plan_and_track(const ppo::ActorCritic& net, mdp::EvalEnvironment& env, const PlanConfig& config = {});

/// Perception-unaware baseline: the road centerline from the start to past
/// the goal, tracked at a fixed speed.
PlanResult track_centerline(mdp::EvalEnvironment& env, double speed);

}  // namespace driftnav::control
