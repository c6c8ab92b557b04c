#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include "driftnav/mdp/train_env.hpp"
#include "driftnav/ppo/checkpoint.hpp"

namespace driftnav::ppo {

struct UpdateMetrics {
  std::int64_t step{0};
  int update{0};
  double mean_episode_reward{0.0};
  int episodes{0};
  UpdateStats stats;
};

/// Training metrics CSV, one row per update:
/// step,update,mean_episode_reward,episodes,policy_loss,value_loss,entropy,clip_fraction
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const UpdateMetrics& m);

struct TrainHooks {
  std::function<void(const UpdateMetrics&)> on_update;
  std::function<void(const PolicyCheckpoint&)> on_checkpoint;
  int checkpoint_every{0};  // updates; 0 disables periodic checkpoints
};

/// PPO on the teleport environment. Fully determined by (bounds, reward,
/// config, resume). When resuming, training continues until
/// config.total_steps counts the steps already taken.
PolicyCheckpoint train(const mdp::SamplerBounds& bounds, const mdp::RewardConfig& reward, const TrainConfig& config,
                       const TrainHooks& hooks = {}, std::optional<PolicyCheckpoint> resume = std::nullopt);

struct EpisodeOutcome {
  double total_reward{0.0};
  mdp::StateVector final_state;
  int steps{0};
};

/// Rolls one training-mode episode with the given action chooser.
EpisodeOutcome run_episode(const mdp::StateVector& initial, const mdp::RewardConfig& reward,
                           const std::function<int(const mdp::StateVector&)>& choose);

}  // namespace driftnav::ppo
