#include "driftnav/mdp/state.hpp"

#include <algorithm>
#include <numeric>

namespace driftnav::mdp {

Eigen::VectorXd StateVector::to_vector() const {
  Eigen::VectorXd v(width(static_cast<int>(traffic.size())));
  v << x_e, y_e, y_c_norm, edge_l, edge_r, Eigen::VectorXd::Zero(kSlotWidth * static_cast<Eigen::Index>(traffic.size()));
  for (std::size_t i = 0; i < traffic.size(); ++i) {
    const auto base = static_cast<Eigen::Index>(kEgoWidth + kSlotWidth * i);
    const auto& t = traffic[i];
    if (!t.present) continue;
    v(base) = 1.0;
    v(base + 1) = t.x;
    v(base + 2) = t.y;
    v(base + 3) = t.v;
  }
  return v;
}

StateVector StateVector::from_vector(const Eigen::VectorXd& v, int n_slots) {
  StateVector s;
  s.x_e = v(0);
  s.y_e = v(1);
  s.y_c_norm = v(2);
  s.edge_l = v(3);
  s.edge_r = v(4);
  s.traffic.resize(static_cast<std::size_t>(n_slots));
  for (int i = 0; i < n_slots; ++i) {
    const Eigen::Index base = kEgoWidth + kSlotWidth * i;
    auto& t = s.traffic[static_cast<std::size_t>(i)];
    t.present = v(base) > 0.5;
    if (t.present) {
      t.x = v(base + 1);
      t.y = v(base + 2);
      t.v = v(base + 3);
    }
  }
  return s;
}

double normalize_centroid(double y_c, double edge_l, double edge_r) noexcept {
  return std::clamp(2.0 * (y_c - edge_l) / (edge_r - edge_l) - 1.0, -1.0, 1.0);
}

double denormalize_centroid(double y_c_norm, double edge_l, double edge_r) noexcept {
  return edge_l + 0.5 * (y_c_norm + 1.0) * (edge_r - edge_l);
}

StateVector build_state(const Pose2D& ego_est, double y_c, double edge_l, double edge_r,
                        const std::vector<TrackedVehicle>& traffic, int n_slots) {
  StateVector s;
  s.x_e = ego_est.x;
  s.y_e = ego_est.y;
  s.y_c_norm = normalize_centroid(y_c, edge_l, edge_r);
  s.edge_l = edge_l;
  s.edge_r = edge_r;
  s.traffic.resize(static_cast<std::size_t>(n_slots));

  std::vector<std::size_t> order(traffic.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const Vec2 ego = ego_est.position();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (traffic[a].position - ego).squaredNorm() < (traffic[b].position - ego).squaredNorm();
  });
  for (std::size_t i = 0; i < order.size() && i < s.traffic.size(); ++i) {
    const auto& t = traffic[order[i]];
    s.traffic[i] = {true, t.position.x(), t.position.y(), t.speed};
  }
  return s;
}

}  // namespace driftnav::mdp
