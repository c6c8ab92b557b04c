#pragma once

#include <random>

#include <Eigen/Core>

#include "driftnav/mdp/state.hpp"
#include "driftnav/ppo/mlp.hpp"

namespace driftnav::ppo {

/// Separate actor and critic networks of identical hidden topology. Inputs
/// are multiplied element-wise by a fixed observation scale first.
struct ActorCritic {
  MlpSpec actor_spec;
  MlpSpec critic_spec;
  MlpParams actor;
  MlpParams critic;
  Eigen::VectorXd observation_scale;

  static ActorCritic create(int input_dim, std::mt19937_64& rng);
  static ActorCritic zeros(int input_dim);
  /// Default scale for the StateVector layout with n_slots traffic slots.
  static Eigen::VectorXd default_observation_scale(int n_slots);

  [[nodiscard]] int input_dim() const noexcept { return actor_spec.input_dim; }
  [[nodiscard]] std::size_t parameter_count() const { return actor.size() + critic.size(); }
  void check_shapes() const;

  [[nodiscard]] Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

struct PolicyOutput {
  Eigen::VectorXd probabilities;  // softmax of the actor logits
  double value{0.0};
};

/// Numerically stable row-wise log-softmax over columns of logits.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits);

PolicyOutput forward(const ActorCritic& net, const Eigen::VectorXd& state);
PolicyOutput forward(const ActorCritic& net, const mdp::StateVector& state);

int greedy_action(const ActorCritic& net, const mdp::StateVector& state);
int sample_action(const Eigen::VectorXd& probabilities, std::mt19937_64& rng);

}  // namespace driftnav::ppo
