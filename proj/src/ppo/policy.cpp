#include "driftnav/ppo/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "driftnav/mdp/action.hpp"

namespace driftnav::ppo {

namespace {

MlpSpec spec_for(int input_dim, int output_dim) {
  MlpSpec s;
  s.input_dim = input_dim;
  s.output_dim = output_dim;
  return s;
}

}  // namespace

Eigen::VectorXd ActorCritic::default_observation_scale(int n_slots) {
  Eigen::VectorXd s(mdp::StateVector::width(n_slots));
  s.head(mdp::StateVector::kEgoWidth) << 1.0 / 20.0, 1.0 / 6.0, 1.0, 1.0 / 6.0, 1.0 / 6.0;
  for (int i = 0; i < n_slots; ++i)
    s.segment(mdp::StateVector::kEgoWidth + mdp::StateVector::kSlotWidth * i, mdp::StateVector::kSlotWidth)
        << 1.0, 1.0 / 20.0, 1.0 / 6.0, 1.0 / 5.0;
  return s;
}

ActorCritic ActorCritic::create(int input_dim, std::mt19937_64& rng) {
  ActorCritic net;
  net.actor_spec = spec_for(input_dim, mdp::kActionCount);
  net.critic_spec = spec_for(input_dim, 1);
  net.actor = MlpParams::orthogonal(net.actor_spec, rng, std::sqrt(2.0), 0.01);
  net.critic = MlpParams::orthogonal(net.critic_spec, rng, std::sqrt(2.0), 1.0);
  const int slots = (input_dim - mdp::StateVector::kEgoWidth) / mdp::StateVector::kSlotWidth;
  net.observation_scale = mdp::StateVector::width(slots) == input_dim ? default_observation_scale(slots)
                                                                      : Eigen::VectorXd::Ones(input_dim);
  return net;
}

ActorCritic ActorCritic::zeros(int input_dim) {
  ActorCritic net;
  net.actor_spec = spec_for(input_dim, mdp::kActionCount);
  net.critic_spec = spec_for(input_dim, 1);
  net.actor = MlpParams::zeros(net.actor_spec);
  net.critic = MlpParams::zeros(net.critic_spec);
  net.observation_scale = Eigen::VectorXd::Ones(input_dim);
  return net;
}

void ActorCritic::check_shapes() const {
  actor.check_shapes(actor_spec);
  critic.check_shapes(critic_spec);
  if (observation_scale.size() != actor_spec.input_dim || critic_spec.input_dim != actor_spec.input_dim)
    throw std::invalid_argument("observation scale does not match the network input");
}

Eigen::VectorXd ActorCritic::flatten() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(parameter_count()));
  out << actor.flatten(), critic.flatten();
  return out;
}

void ActorCritic::assign(const Eigen::VectorXd& flat) {
  const auto na = static_cast<Eigen::Index>(actor.size());
  actor.assign(flat.head(na));
  critic.assign(flat.tail(flat.size() - na));
}

Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const double m = logits.col(j).maxCoeff();
    const double lse = m + std::log((logits.col(j).array() - m).exp().sum());
    out.col(j) = logits.col(j).array() - lse;
  }
  return out;
}

PolicyOutput forward(const ActorCritic& net, const Eigen::VectorXd& state) {
  if (state.size() != net.observation_scale.size())
    throw std::invalid_argument("state width does not match the network input");
  const Eigen::VectorXd x = state.cwiseProduct(net.observation_scale);
  const Eigen::MatrixXd logits = mlp_forward(net.actor, x);
  const Eigen::MatrixXd value = mlp_forward(net.critic, x);
  return {log_softmax(logits).col(0).array().exp(), value(0, 0)};
}

PolicyOutput forward(const ActorCritic& net, const mdp::StateVector& state) { return forward(net, state.to_vector()); }

int greedy_action(const ActorCritic& net, const mdp::StateVector& state) {
  Eigen::Index best = 0;
  forward(net, state).probabilities.maxCoeff(&best);
  return static_cast<int>(best);
}

int sample_action(const Eigen::VectorXd& probabilities, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    acc += probabilities(i);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probabilities.size() - 1);
}

}  // namespace driftnav::ppo
