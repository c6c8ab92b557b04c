#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "driftnav/mdp/eval_env.hpp"

namespace driftnav::eval {

/// t,x_gt,y_gt,yaw_gt,x_est,y_est,yaw_est,steer,speed
void write_trajectory_csv(std::ostream& out, std::span<const mdp::EvalSample> samples);
/// Throws ParseError naming the offending line.
std::vector<mdp::EvalSample> read_trajectory_csv(std::istream& in);

}  // namespace driftnav::eval
