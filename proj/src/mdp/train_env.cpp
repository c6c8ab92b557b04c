#include "driftnav/mdp/train_env.hpp"

#include <cmath>

#include "driftnav/core/error.hpp"

namespace driftnav::mdp {

void SamplerBounds::validate() const {
  if (!(edge_l < edge_r)) throw ValidationError("edge_l", "must be less than edge_r");
  if (n_slots < 0) throw ValidationError("n_slots", "must be non-negative");
  if (traffic_presence < 0.0 || traffic_presence > 1.0) throw ValidationError("traffic_presence", "must be in [0, 1]");
  if (!(traffic_dx_min <= traffic_dx_max)) throw ValidationError("traffic_dx_min", "must not exceed traffic_dx_max");
  if (!(0.0 <= traffic_speed_min && traffic_speed_min <= traffic_speed_max))
    throw ValidationError("traffic_speed_min", "must be in [0, traffic_speed_max]");
  if (fixed_y_c_norm && std::abs(*fixed_y_c_norm) > 1.0) throw ValidationError("fixed_y_c_norm", "must be in [-1, 1]");
}

StateVector sample_initial_state(std::mt19937_64& rng, const SamplerBounds& b, double collision_radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  StateVector s;
  s.edge_l = b.edge_l;
  s.edge_r = b.edge_r;
  s.x_e = 0.0;
  s.y_e = uniform(b.edge_l, b.edge_r);
  s.y_c_norm = b.fixed_y_c_norm ? *b.fixed_y_c_norm : uniform(-1.0, 1.0);
  s.traffic.resize(static_cast<std::size_t>(b.n_slots));
  for (auto& slot : s.traffic) {
    if (unit(rng) >= b.traffic_presence) continue;
    for (;;) {
      slot = {true, uniform(b.traffic_dx_min, b.traffic_dx_max), uniform(b.edge_l, b.edge_r),
              uniform(b.traffic_speed_min, b.traffic_speed_max)};
      if (std::hypot(slot.x - s.x_e, slot.y - s.y_e) >= collision_radius) break;
    }
  }
  return s;
}

StateVector teleport(const StateVector& state, const Action& action, double dt) {
  StateVector next = state;
  next.x_e += action.a_x;
  next.y_e += action.a_y;
  for (auto& t : next.traffic)
    if (t.present) t.x += t.v * dt;
  return next;
}

const StateVector& TrainingEnvironment::reset(const StateVector& initial) {
  state_ = initial;
  steps_ = 0;
  done_ = false;
  return state_;
}

StepResult TrainingEnvironment::step(const Action& action) {
  if (done_) throw StepAfterDone();
  StateVector next = teleport(state_, action, kStepSeconds);
  RewardBreakdown r = reward(state_, action, next, reward_);
  ++steps_;
  done_ = r.terminal() || steps_ >= kEpisodeSteps;
  state_ = next;
  return {state_, std::move(r), done_};
}

}  // namespace driftnav::mdp
