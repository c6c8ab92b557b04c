#pragma once

#include <array>

namespace driftnav::mdp {

inline constexpr std::array<double, 4> kForwardSteps{1.0, 2.0, 3.0, 5.0};
inline constexpr std::array<double, 5> kLateralSteps{-2.0, -1.0, 0.0, 1.0, 2.0};
inline constexpr int kActionCount = static_cast<int>(kForwardSteps.size() * kLateralSteps.size());

/// Next waypoint in the vehicle frame. index = 5 * rank(a_x) + rank(a_y).
struct Action {
  double a_x{1.0};
  double a_y{0.0};
  int index{2};

  /// Throws std::out_of_range outside 0..19.
  static Action from_index(int index);
  /// Throws std::invalid_argument if (a_x, a_y) is not on the grid.
  static Action from_components(double a_x, double a_y);
};

}  // namespace driftnav::mdp
