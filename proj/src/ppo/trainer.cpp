#include "driftnav/ppo/trainer.hpp"

#include <ostream>
#include <sstream>

namespace driftnav::ppo {

void write_metrics_header(std::ostream& out) {
  out << "step,update,mean_episode_reward,episodes,policy_loss,value_loss,entropy,clip_fraction\n";
}

void write_metrics_row(std::ostream& out, const UpdateMetrics& m) {
  out << m.step << ',' << m.update << ',' << m.mean_episode_reward << ',' << m.episodes << ','
      << m.stats.policy_loss << ',' << m.stats.value_loss << ',' << m.stats.entropy << ',' << m.stats.clip_fraction
      << '\n';
}

namespace {

struct BatchOutput {
  Eigen::MatrixXd log_probs;  // actions x batch
  Eigen::VectorXd values;
};

BatchOutput forward_batch(const ActorCritic& net, const Eigen::MatrixXd& states) {
  const Eigen::MatrixXd x = states.array().colwise() * net.observation_scale.array();
  return {log_softmax(mlp_forward(net.actor, x)), mlp_forward(net.critic, x).row(0).transpose()};
}

int sample_from_log_probs(const Eigen::VectorXd& logp, std::mt19937_64& rng) {
  return sample_action(logp.array().exp().matrix(), rng);
}

}  // namespace

PolicyCheckpoint train(const mdp::SamplerBounds& bounds, const mdp::RewardConfig& reward, const TrainConfig& config,
                       const TrainHooks& hooks, std::optional<PolicyCheckpoint> resume) {
  config.validate();
  bounds.validate();
  reward.validate();
  const int input_dim = mdp::StateVector::width(bounds.n_slots);

  std::mt19937_64 rng(config.seed);
  PolicyCheckpoint ckpt;
  if (resume) {
    ckpt = std::move(*resume);
    if (ckpt.net.input_dim() != input_dim) throw std::invalid_argument("checkpoint input width does not match bounds");
    if (!ckpt.rng_state.empty()) {
      std::istringstream in(ckpt.rng_state);
      in >> rng;
    }
    ckpt.optimizer.lr = config.learning_rate;
  } else {
    ckpt.net = ActorCritic::create(input_dim, rng);
    ckpt.optimizer = Adam(ckpt.net.parameter_count(), config.learning_rate);
  }
  ckpt.config = config;
  ckpt.n_slots = bounds.n_slots;

  const int n_envs = config.n_envs;
  const int horizon = config.rollout_horizon / n_envs;
  std::vector<mdp::TrainingEnvironment> envs(static_cast<std::size_t>(n_envs), mdp::TrainingEnvironment(reward));
  std::vector<double> running(static_cast<std::size_t>(n_envs), 0.0);
  for (auto& env : envs) env.reset(mdp::sample_initial_state(rng, bounds, reward.collision_radius));

  RolloutBuffer buffer;
  buffer.n_envs = n_envs;
  Eigen::MatrixXd obs(input_dim, n_envs);
  while (ckpt.steps < config.total_steps) {
    buffer.clear();
    double episode_reward_sum = 0.0;
    int episodes = 0;
    for (int t = 0; t < horizon; ++t) {
      for (int e = 0; e < n_envs; ++e) obs.col(e) = envs[static_cast<std::size_t>(e)].state().to_vector();
      const BatchOutput out = forward_batch(ckpt.net, obs);
      for (int e = 0; e < n_envs; ++e) {
        auto& env = envs[static_cast<std::size_t>(e)];
        const int a = sample_from_log_probs(out.log_probs.col(e), rng);
        const mdp::StepResult step = env.step(mdp::Action::from_index(a));
        buffer.states.push_back(obs.col(e));
        buffer.actions.push_back(a);
        buffer.log_probs.push_back(out.log_probs(a, e));
        buffer.values.push_back(out.values(e));
        buffer.rewards.push_back(step.reward.total);
        buffer.dones.push_back(step.done);
        running[static_cast<std::size_t>(e)] += step.reward.total;
        if (step.done) {
          episode_reward_sum += running[static_cast<std::size_t>(e)];
          ++episodes;
          running[static_cast<std::size_t>(e)] = 0.0;
          env.reset(mdp::sample_initial_state(rng, bounds, reward.collision_radius));
        }
      }
    }
    for (int e = 0; e < n_envs; ++e) obs.col(e) = envs[static_cast<std::size_t>(e)].state().to_vector();
    const BatchOutput tail = forward_batch(ckpt.net, obs);
    buffer.last_values.assign(tail.values.data(), tail.values.data() + n_envs);

    compute_gae(buffer, config.gamma, config.gae_lambda);
    UpdateMetrics metrics;
    metrics.stats = ppo_update(ckpt.net, ckpt.optimizer, buffer, config, rng);
    ckpt.steps += static_cast<std::int64_t>(buffer.size());
    ++ckpt.updates;
    metrics.step = ckpt.steps;
    metrics.update = ckpt.updates;
    metrics.episodes = episodes;
    metrics.mean_episode_reward = episodes > 0 ? episode_reward_sum / episodes : 0.0;

    std::ostringstream state;
    state << rng;
    ckpt.rng_state = state.str();
    if (hooks.on_update) hooks.on_update(metrics);
    if (hooks.on_checkpoint && hooks.checkpoint_every > 0 && ckpt.updates % hooks.checkpoint_every == 0)
      hooks.on_checkpoint(ckpt);
  }
  return ckpt;
}

EpisodeOutcome run_episode(const mdp::StateVector& initial, const mdp::RewardConfig& reward,
                           const std::function<int(const mdp::StateVector&)>& choose) {
  mdp::TrainingEnvironment env(reward);
  env.reset(initial);
  EpisodeOutcome out;
  while (!env.done()) {
    const auto step = env.step(mdp::Action::from_index(choose(env.state())));
    out.total_reward += step.reward.total;
    ++out.steps;
  }
  out.final_state = env.state();
  return out;
}

}  // namespace driftnav::ppo
