#pragma once

#include <optional>
#include <random>
#include <stdexcept>

#include "driftnav/mdp/reward.hpp"

namespace driftnav::mdp {

class StepAfterDone : public std::logic_error {
 public:
  StepAfterDone() : std::logic_error("step() called on a finished episode") {}
};

struct StepResult {
  StateVector state;
  RewardBreakdown reward;
  bool done{false};
};

/// Ranges for synthetic initial states.
struct SamplerBounds {
  double edge_l{-6.0};
  double edge_r{6.0};
  int n_slots{2};
  double traffic_presence{0.6};  // per-slot probability
  double traffic_dx_min{-25.0};  // relative to the ego
  double traffic_dx_max{35.0};
  double traffic_speed_min{0.0};
  double traffic_speed_max{5.0};
  std::optional<double> fixed_y_c_norm;  // curriculum override

  void validate() const;
};

/// Uniform over ego y, traffic presence, position and speed, and y_c_norm.
/// Traffic inside the collision radius at t = 0 is rejected and resampled.
StateVector sample_initial_state(std::mt19937_64& rng, const SamplerBounds& bounds,
                                 double collision_radius = 3.0);

/// Teleport dynamics used for training: the ego jumps by (a_x, a_y), traffic
/// moves v * dt along X, and the feature centroid is frozen for the episode.
class TrainingEnvironment {
 public:
  static constexpr int kEpisodeSteps = 10;
  static constexpr double kStepSeconds = 1.0;

  explicit TrainingEnvironment(RewardConfig reward = {}) : reward_(reward) {}

  const StateVector& reset(const StateVector& initial);
  StepResult step(const Action& action);

  [[nodiscard]] const StateVector& state() const noexcept { return state_; }
  [[nodiscard]] bool done() const noexcept { return done_; }
  [[nodiscard]] int steps() const noexcept { return steps_; }
  [[nodiscard]] const RewardConfig& reward_config() const noexcept { return reward_; }

 private:
  RewardConfig reward_;
  StateVector state_;
  int steps_{0};
  bool done_{true};
};

/// Teleport transition shared by training and the inference-time unroll.
StateVector teleport(const StateVector& state, const Action& action, double dt);

}  // namespace driftnav::mdp
