#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "driftnav/core/pose.hpp"
#include "driftnav/mdp/eval_env.hpp"

namespace driftnav::eval {

class LengthMismatch : public std::invalid_argument {
 public:
  LengthMismatch(std::size_t est, std::size_t gt)
      : std::invalid_argument("trajectory lengths differ: " + std::to_string(est) + " estimated vs " +
                              std::to_string(gt) + " ground truth") {}
};

struct DriftMetrics {
  double average_drift{0.0};      // m, mean xy error over all steps
  double final_drift{0.0};        // m, xy error at the last step
  double rotational_offset{0.0};  // rad, |wrapped yaw error| at the last step
  bool operator==(const DriftMetrics&) const = default;
};

/// Step-aligned comparison. Throws LengthMismatch, and std::invalid_argument
/// for empty input.
DriftMetrics compute_drift(std::span<const Pose2D> est, std::span<const Pose2D> gt);

enum class Arm { Ladfn, LadfnFiltered, Vanilla, VanillaFiltered };
inline constexpr Arm kAllArms[] = {Arm::Ladfn, Arm::LadfnFiltered, Arm::Vanilla, Arm::VanillaFiltered};
std::string_view to_string(Arm arm) noexcept;
/// Accepts the names produced by to_string. Throws std::invalid_argument.
Arm parse_arm(std::string_view name);
[[nodiscard]] inline bool is_filtered(Arm a) noexcept { return a == Arm::LadfnFiltered || a == Arm::VanillaFiltered; }
[[nodiscard]] inline bool is_ladfn(Arm a) noexcept { return a == Arm::Ladfn || a == Arm::LadfnFiltered; }
/// The Vanilla arm with the same filtering setting.
[[nodiscard]] inline Arm baseline_of(Arm a) noexcept { return is_filtered(a) ? Arm::VanillaFiltered : Arm::Vanilla; }

struct TrajectoryReport {
  std::string scenario;
  Arm arm{Arm::Ladfn};
  double lidar_range{50.0};
  std::uint64_t seed{0};
  std::optional<DriftMetrics> metrics;  // absent after an early collision
  bool collided{false};
  bool lane_breach{false};
  bool goal_reached{false};
  std::string outcome;  // EvalStatus name, or "error: ..." for a failed run
  double duration{0.0};
  double distance{0.0};
  bool operator==(const TrajectoryReport&) const = default;
};

/// Report over a complete pose pair; no event flags set.
TrajectoryReport compute_report(std::span<const Pose2D> est, std::span<const Pose2D> gt);

/// Fraction of the road a run must cover before a collision for its drift
/// metrics to count.
inline constexpr double kEarlyCollisionFraction = 0.1;

/// Report of a finished evaluation run.
TrajectoryReport report_run(const mdp::EvalEnvironment& env, Arm arm);

}  // namespace driftnav::eval
