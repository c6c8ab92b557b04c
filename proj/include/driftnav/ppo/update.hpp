#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftnav/ppo/policy.hpp"
#include "driftnav/ppo/rollout.hpp"

namespace driftnav::ppo {

struct TrainConfig {
  double gamma{0.9999};
  double gae_lambda{0.95};
  double clip_epsilon{0.2};
  int batch_size{128};
  int rollout_horizon{2048};  // transitions per update, across all envs
  int n_envs{8};
  int epochs{10};
  double learning_rate{3e-4};
  double entropy_coef{0.01};
  double value_coef{0.5};
  double max_grad_norm{0.5};
  std::int64_t total_steps{200'000};
  std::uint64_t seed{0};

  void validate() const;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(int minibatch, const std::string& what)
      : std::runtime_error("non-finite loss in minibatch " + std::to_string(minibatch) + ": " + what),
        minibatch_(minibatch) {}
  [[nodiscard]] int minibatch() const noexcept { return minibatch_; }

 private:
  int minibatch_;
};

/// Per-minibatch loss terms. `loss` is what the optimizer minimizes:
/// -surrogate + value_coef * value_loss - entropy_coef * entropy.
struct LossTerms {
  double loss{0.0};
  double policy_loss{0.0};
  double value_loss{0.0};
  double entropy{0.0};
  double clip_fraction{0.0};
};

struct Minibatch {
  Eigen::MatrixXd states;  // raw states as columns
  std::vector<int> actions;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
};

/// Loss and its exact gradient with respect to every network parameter.
LossTerms ppo_loss(const ActorCritic& net, const Minibatch& batch, const TrainConfig& config, ActorCritic* grad);

/// Adam with bias correction over the flattened parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-5);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  Eigen::VectorXd m, v;
  double lr{3e-4}, beta1{0.9}, beta2{0.999}, eps{1e-5};
  std::int64_t t{0};
};

struct UpdateStats {
  double policy_loss{0.0};
  double value_loss{0.0};
  double entropy{0.0};
  double clip_fraction{0.0};
  double first_pass_clip_fraction{0.0};  // first minibatch of the first epoch
  int minibatches{0};
};

/// Clipped-surrogate epochs over shuffled minibatches. The buffer must have
/// advantages and returns computed; they are normalized here per update.
UpdateStats ppo_update(ActorCritic& net, Adam& optimizer, const RolloutBuffer& buffer, const TrainConfig& config,
                       std::mt19937_64& rng);

}  // namespace driftnav::ppo
