#include "driftnav/ppo/rollout.hpp"

#include <cmath>
#include <stdexcept>

namespace driftnav::ppo {

void RolloutBuffer::check() const {
  const std::size_t n = rewards.size();
  if (states.size() != n || actions.size() != n || log_probs.size() != n || values.size() != n || dones.size() != n)
    throw std::logic_error("rollout buffer sequences have different lengths");
  if (n_envs <= 0 || n % static_cast<std::size_t>(n_envs) != 0)
    throw std::logic_error("rollout buffer length is not a multiple of n_envs");
  if (last_values.size() != static_cast<std::size_t>(n_envs)) throw std::logic_error("missing bootstrap values");
}

void RolloutBuffer::clear() {
  states.clear();
  actions.clear();
  log_probs.clear();
  values.clear();
  rewards.clear();
  dones.clear();
  last_values.clear();
  advantages.clear();
  returns.clear();
}

void compute_gae(RolloutBuffer& b, double gamma, double lambda) {
  b.check();
  const std::size_t n = b.size();
  const auto envs = static_cast<std::size_t>(b.n_envs);
  b.advantages.assign(n, 0.0);
  b.returns.assign(n, 0.0);
  std::vector<double> next_adv(envs, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t e = i % envs;
    const bool tail = i + envs >= n;
    const double next_value = tail ? b.last_values[e] : b.values[i + envs];
    const double nonterminal = b.dones[i] ? 0.0 : 1.0;
    const double delta = b.rewards[i] + gamma * next_value * nonterminal - b.values[i];
    const double adv = delta + gamma * lambda * nonterminal * (tail ? 0.0 : next_adv[e]);
    next_adv[e] = adv;
    b.advantages[i] = adv;
    b.returns[i] = adv + b.values[i];
  }
}

std::vector<double> normalize_advantages(const std::vector<double>& a) {
  if (a.empty()) return {};
  double mean = 0.0;
  for (double v : a) mean += v;
  mean /= static_cast<double>(a.size());
  double var = 0.0;
  for (double v : a) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(a.size()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] - mean) / (sd + 1e-8);
  return out;
}

}  // namespace driftnav::ppo
