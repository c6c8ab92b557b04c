#pragma once

#include <iosfwd>
#include <span>

#include "driftnav/mdp/reward.hpp"

namespace driftnav::mdp {

struct Transition {
  StateVector state;
  int action{0};
  RewardBreakdown reward;
  bool done{false};
};

/// Audit log. The first line is "# reward <config.describe()>", then a CSV
/// header: episode state columns (s_*), action, a_x, a_y, G, F, T, P, p_i,
/// total, done.
void write_transition_log(std::ostream& out, const RewardConfig& config, std::span<const Transition> log,
                          int n_slots);

}  // namespace driftnav::mdp
