#pragma once

#include <vector>

#include <Eigen/Core>

namespace driftnav::ppo {

/// Time-major storage: entry t * n_envs + e is env e at step t. dones[i]
/// marks that the episode ended with transition i.
struct RolloutBuffer {
  int n_envs{1};
  std::vector<Eigen::VectorXd> states;
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<bool> dones;
  std::vector<double> last_values;  // V(s_T) per env for the bootstrap
  std::vector<double> advantages;
  std::vector<double> returns;

  [[nodiscard]] std::size_t size() const noexcept { return rewards.size(); }
  [[nodiscard]] int horizon() const noexcept { return static_cast<int>(size()) / n_envs; }
  /// Throws std::logic_error if the sequences disagree in length.
  void check() const;
  void clear();
};

/// delta_t = r_t + gamma V(s_{t+1}) (1 - done_t) - V(s_t)
/// A_t = delta_t + gamma lambda (1 - done_t) A_{t+1};  returns = A + V
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda);

/// (a - mean) / (std + 1e-8) over the whole vector.
std::vector<double> normalize_advantages(const std::vector<double>& advantages);

}  // namespace driftnav::ppo
