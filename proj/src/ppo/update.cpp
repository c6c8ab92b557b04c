#include "driftnav/ppo/update.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftnav/core/error.hpp"

namespace driftnav::ppo {

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma", "must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ValidationError("gae_lambda", "must be in [0, 1]");
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) throw ValidationError("clip_epsilon", "must be in (0, 1)");
  if (batch_size <= 0) throw ValidationError("batch_size", "must be positive");
  if (n_envs <= 0) throw ValidationError("n_envs", "must be positive");
  if (rollout_horizon <= 0 || rollout_horizon % n_envs != 0)
    throw ValidationError("rollout_horizon", "must be a positive multiple of n_envs");
  if (epochs < 0) throw ValidationError("epochs", "must be non-negative");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate", "must be positive");
  if (!(max_grad_norm > 0.0)) throw ValidationError("max_grad_norm", "must be positive");
  if (total_steps < 0) throw ValidationError("total_steps", "must be non-negative");
}

LossTerms ppo_loss(const ActorCritic& net, const Minibatch& batch, const TrainConfig& config, ActorCritic* grad) {
  const auto n = batch.states.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::MatrixXd x = batch.states.array().colwise() * net.observation_scale.array();

  MlpTape actor_tape;
  MlpTape critic_tape;
  const Eigen::MatrixXd logits = mlp_forward(net.actor, x, grad ? &actor_tape : nullptr);
  const Eigen::MatrixXd values = mlp_forward(net.critic, x, grad ? &critic_tape : nullptr);
  const Eigen::MatrixXd logp = log_softmax(logits);
  const Eigen::MatrixXd probs = logp.array().exp();

  LossTerms terms;
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(logits.rows(), n);
  Eigen::MatrixXd d_values(1, n);
  const double eps = config.clip_epsilon;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int a = batch.actions[static_cast<std::size_t>(j)];
    const double adv = batch.advantages(j);
    const double ratio = std::exp(logp(a, j) - batch.old_log_probs(j));
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    const bool unclipped_branch = ratio * adv <= clipped * adv;
    terms.policy_loss -= std::min(ratio * adv, clipped * adv) * inv_n;
    if (std::abs(ratio - 1.0) > eps) terms.clip_fraction += inv_n;

    double entropy = 0.0;
    for (Eigen::Index k = 0; k < logits.rows(); ++k) entropy -= probs(k, j) * logp(k, j);
    terms.entropy += entropy * inv_n;

    const double err = values(0, j) - batch.returns(j);
    terms.value_loss += err * err * inv_n;

    if (!grad) continue;
    // d(-surrogate)/d logits = -adv * ratio * (e_a - pi) on the unclipped branch
    const double g = unclipped_branch ? -adv * ratio * inv_n : 0.0;
    for (Eigen::Index k = 0; k < logits.rows(); ++k) {
      const double onehot = (k == a) ? 1.0 : 0.0;
      // d(-c H)/d z_k = c * pi_k (log pi_k + H)
      d_logits(k, j) = g * (onehot - probs(k, j)) +
                       config.entropy_coef * inv_n * probs(k, j) * (logp(k, j) + entropy);
    }
    d_values(0, j) = config.value_coef * 2.0 * err * inv_n;
  }
  terms.loss = terms.policy_loss + config.value_coef * terms.value_loss - config.entropy_coef * terms.entropy;

  if (grad) {
    grad->actor.set_zero();
    grad->critic.set_zero();
    mlp_backward(net.actor, actor_tape, d_logits, grad->actor);
    mlp_backward(net.critic, critic_tape, d_values, grad->critic);
  }
  return terms;
}

Adam::Adam(std::size_t n, double lr_, double beta1_, double beta2_, double eps_)
    : m(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))),
      v(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))),
      lr(lr_),
      beta1(beta1_),
      beta2(beta2_),
      eps(eps_) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

UpdateStats ppo_update(ActorCritic& net, Adam& optimizer, const RolloutBuffer& buffer, const TrainConfig& config,
                       std::mt19937_64& rng) {
  buffer.check();
  if (buffer.advantages.size() != buffer.size()) throw std::logic_error("advantages not computed");
  const std::size_t n = buffer.size();
  const std::vector<double> adv = normalize_advantages(buffer.advantages);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  UpdateStats stats;
  ActorCritic grad = net;
  const int width = net.input_dim();
  int mb_index = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(config.batch_size));
      const auto m = static_cast<Eigen::Index>(end - start);
      Minibatch mb;
      mb.states.resize(width, m);
      mb.actions.resize(static_cast<std::size_t>(m));
      mb.old_log_probs.resize(m);
      mb.advantages.resize(m);
      mb.returns.resize(m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::size_t i = order[start + static_cast<std::size_t>(j)];
        mb.states.col(j) = buffer.states[i];
        mb.actions[static_cast<std::size_t>(j)] = buffer.actions[i];
        mb.old_log_probs(j) = buffer.log_probs[i];
        mb.advantages(j) = adv[i];
        mb.returns(j) = buffer.returns[i];
      }

      const LossTerms terms = ppo_loss(net, mb, config, &grad);
      if (!std::isfinite(terms.loss)) throw NonFiniteLoss(mb_index, "loss=" + std::to_string(terms.loss));
      Eigen::VectorXd g = grad.flatten();
      if (!g.allFinite()) throw NonFiniteLoss(mb_index, "gradient");
      const double norm = g.norm();
      if (norm > config.max_grad_norm) g *= config.max_grad_norm / norm;

      Eigen::VectorXd params = net.flatten();
      optimizer.step(params, g);
      net.assign(params);

      if (mb_index == 0) stats.first_pass_clip_fraction = terms.clip_fraction;
      stats.policy_loss += terms.policy_loss;
      stats.value_loss += terms.value_loss;
      stats.entropy += terms.entropy;
      stats.clip_fraction += terms.clip_fraction;
      ++mb_index;
    }
  }
  stats.minibatches = mb_index;
  if (mb_index > 0) {
    const double k = 1.0 / mb_index;
    stats.policy_loss *= k;
    stats.value_loss *= k;
    stats.entropy *= k;
    stats.clip_fraction *= k;
  }
  return stats;
}

}  // namespace driftnav::ppo
