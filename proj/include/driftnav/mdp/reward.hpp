#pragma once

#include <string>
#include <vector>

#include "driftnav/mdp/action.hpp"
#include "driftnav/mdp/state.hpp"

namespace driftnav::mdp {

struct RewardConfig {
  double k1{1.0};
  double k2{0.5};
  double k3{1.0};
  double k4{0.5};
  int odd_power{3};
  double w_fwd{0.2};
  double terminal_penalty{10.0};
  double collision_radius{3.0};
  double proximity_radius{10.0};

  void validate() const;
  /// One-line "key=value,..." echo for log headers.
  [[nodiscard]] std::string describe() const;
};

struct RewardBreakdown {
  double G{0.0};
  double F{0.0};
  double T{0.0};
  bool P{false};
  std::vector<bool> p;  // per traffic slot
  double total{0.0};
  bool collision{false};
  bool out_of_road{false};

  [[nodiscard]] bool terminal() const noexcept { return collision || out_of_road; }
};

/// K1 y_c^O * yhat_e - K2 (1 - |y_c^O|) |a_y|, with yhat_e the ego's lateral
/// position scaled to [-1, 1] across the road.
double feature_reward(const StateVector& state, const Action& action, const RewardConfig& config);

struct TrafficReward {
  double T{0.0};
  std::vector<bool> p;
};

/// p_i is evaluated on `state`; the K3/K4 terms reward growth of the
/// longitudinal and lateral separations from state to next_state.
TrafficReward traffic_reward(const StateVector& state, const Action& action, const StateVector& next_state,
                             const RewardConfig& config);

/// R = G + (1 - P) F + T. F is evaluated on next_state (where the action
/// put the ego). On collision or lane breach G = -terminal_penalty and F, T
/// are zeroed, so the identity holds on terminal transitions too.
RewardBreakdown reward(const StateVector& state, const Action& action, const StateVector& next_state,
                       const RewardConfig& config);

bool collides(const StateVector& state, double radius);
bool out_of_road(const StateVector& state);

}  // namespace driftnav::mdp
