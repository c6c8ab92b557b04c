#include "driftnav/mdp/action.hpp"

#include <stdexcept>
#include <string>

namespace driftnav::mdp {

Action Action::from_index(int index) {
  if (index < 0 || index >= kActionCount) throw std::out_of_range("action index " + std::to_string(index));
  const auto nx = static_cast<int>(kLateralSteps.size());
  return {kForwardSteps[static_cast<std::size_t>(index / nx)], kLateralSteps[static_cast<std::size_t>(index % nx)],
          index};
}

Action Action::from_components(double a_x, double a_y) {
  for (std::size_t i = 0; i < kForwardSteps.size(); ++i) {
    if (kForwardSteps[i] != a_x) continue;
    for (std::size_t j = 0; j < kLateralSteps.size(); ++j)
      if (kLateralSteps[j] == a_y) return {a_x, a_y, static_cast<int>(i * kLateralSteps.size() + j)};
  }
  throw std::invalid_argument("(" + std::to_string(a_x) + ", " + std::to_string(a_y) + ") is not an action");
}

}  // namespace driftnav::mdp
