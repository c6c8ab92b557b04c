#include "driftnav/mdp/reward.hpp"

#include <cmath>
#include <sstream>

#include "driftnav/core/error.hpp"

namespace driftnav::mdp {

void RewardConfig::validate() const {
  if (odd_power < 1 || odd_power % 2 == 0) throw ValidationError("odd_power", "must be an odd integer >= 1");
  if (!(collision_radius < proximity_radius))
    throw ValidationError("collision_radius", "must be smaller than proximity_radius");
  if (!(terminal_penalty >= 0.0)) throw ValidationError("terminal_penalty", "must be non-negative");
}

std::string RewardConfig::describe() const {
  std::ostringstream out;
  out << "K1=" << k1 << ",K2=" << k2 << ",K3=" << k3 << ",K4=" << k4 << ",O=" << odd_power << ",w_fwd=" << w_fwd
      << ",terminal_penalty=" << terminal_penalty << ",collision_radius=" << collision_radius
      << ",proximity_radius=" << proximity_radius;
  return out.str();
}

namespace {

double odd_pow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

double feature_reward(const StateVector& state, const Action& action, const RewardConfig& config) {
  const double yc = odd_pow(state.y_c_norm, config.odd_power);
  return config.k1 * yc * state.y_e_norm() - config.k2 * (1.0 - std::abs(yc)) * std::abs(action.a_y);
}

TrafficReward traffic_reward(const StateVector& state, const Action&, const StateVector& next_state,
                             const RewardConfig& config) {
  TrafficReward out;
  out.p.assign(state.traffic.size(), false);
  for (std::size_t i = 0; i < state.traffic.size(); ++i) {
    const auto& now = state.traffic[i];
    if (!now.present) continue;
    if (std::hypot(now.x - state.x_e, now.y - state.y_e) > config.proximity_radius) continue;
    out.p[i] = true;
    const auto& next = next_state.traffic[i];
    const double dx = std::abs(next_state.x_e - next.x) - std::abs(state.x_e - now.x);
    const double dy = std::abs(next_state.y_e - next.y) - std::abs(state.y_e - now.y);
    out.T += config.k3 * dx + config.k4 * dy;
  }
  return out;
}

bool collides(const StateVector& s, double radius) {
  for (const auto& t : s.traffic)
    if (t.present && std::hypot(t.x - s.x_e, t.y - s.y_e) < radius) return true;
  return false;
}

bool out_of_road(const StateVector& s) { return s.y_e < s.edge_l || s.y_e > s.edge_r; }

RewardBreakdown reward(const StateVector& state, const Action& action, const StateVector& next_state,
                       const RewardConfig& config) {
  RewardBreakdown out;
  auto traffic = traffic_reward(state, action, next_state, config);
  out.p = std::move(traffic.p);
  for (bool flag : out.p) out.P = out.P || flag;
  out.collision = collides(next_state, config.collision_radius);
  out.out_of_road = out_of_road(next_state);

  if (out.terminal()) {
    out.G = -config.terminal_penalty;
  } else {
    out.G = config.w_fwd * action.a_x;
    out.F = feature_reward(next_state, action, config);
    out.T = traffic.T;
  }
  out.total = out.G + (out.P ? 0.0 : 1.0) * out.F + out.T;
  return out;
}

}  // namespace driftnav::mdp
