#pragma once

#include <vector>

#include <Eigen/Core>

#include "driftnav/core/pose.hpp"

namespace driftnav::mdp {

struct TrafficSlot {
  bool present{false};
  double x{0.0};
  double y{0.0};
  double v{0.0};
};

/// RL observation, expressed in the RL frame (X along the road).
struct StateVector {
  double x_e{0.0};
  double y_e{0.0};
  double y_c_norm{0.0};
  double edge_l{-6.0};
  double edge_r{6.0};
  std::vector<TrafficSlot> traffic;  // exactly N_max slots

  static constexpr int kEgoWidth = 5;
  static constexpr int kSlotWidth = 4;
  [[nodiscard]] static int width(int n_slots) noexcept { return kEgoWidth + kSlotWidth * n_slots; }

  /// [x_e, y_e, y_c_norm, edge_l, edge_r, (tr_p, x_tr, y_tr, v_tr) per slot]
  [[nodiscard]] Eigen::VectorXd to_vector() const;
  static StateVector from_vector(const Eigen::VectorXd& v, int n_slots);

  /// Ego y mapped to [-1, 1] across the road (edge_l -> -1, edge_r -> 1).
  [[nodiscard]] double y_e_norm() const noexcept { return 2.0 * (y_e - edge_l) / (edge_r - edge_l) - 1.0; }
};

/// clip(2 (y_c - edge_l) / (edge_r - edge_l) - 1, -1, 1)
double normalize_centroid(double y_c, double edge_l, double edge_r) noexcept;
/// Inverse of the scaling above, ignoring the clip.
double denormalize_centroid(double y_c_norm, double edge_l, double edge_r) noexcept;

struct TrackedVehicle {
  Vec2 position;  // RL frame
  double speed{0.0};
};

/// Assembles the observation. The nearest n_slots vehicles fill the slots in
/// order of distance; the rest are zero-filled and marked absent.
StateVector build_state(const Pose2D& ego_est, double y_c, double edge_l, double edge_r,
                        const std::vector<TrackedVehicle>& traffic, int n_slots);

}  // namespace driftnav::mdp
