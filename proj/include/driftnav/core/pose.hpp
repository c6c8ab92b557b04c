#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace driftnav {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

/// Planar pose. Heading is kept wrapped into (-pi, pi] by every operation
/// that produces a pose; construct through make() when the input may be
/// outside that interval.
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  static Pose2D make(double x, double y, double yaw) noexcept {
    return {x, y, wrap_angle(yaw)};
  }

  [[nodiscard]] Vec2 position() const noexcept { return {x, y}; }

  /// Maps a point expressed in this pose's local frame into the parent frame.
  [[nodiscard]] Vec2 transform(const Vec2& local) const noexcept {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {x + c * local.x() - s * local.y(), y + s * local.x() + c * local.y()};
  }

  /// Maps a parent-frame point into this pose's local frame.
  [[nodiscard]] Vec2 inverse_transform(const Vec2& world) const noexcept {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    const double dx = world.x() - x;
    const double dy = world.y() - y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }

  /// this ∘ rel: applies a relative motion expressed in this pose's frame.
  [[nodiscard]] Pose2D compose(const Pose2D& rel) const noexcept {
    const Vec2 p = transform(rel.position());
    return make(p.x(), p.y(), yaw + rel.yaw);
  }

  [[nodiscard]] Pose2D inverse() const noexcept {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return make(-c * x - s * y, s * x - c * y, -yaw);
  }

  /// Relative motion from `from` to `to`, expressed in `from`'s frame.
  static Pose2D between(const Pose2D& from, const Pose2D& to) noexcept {
    const Vec2 p = from.inverse_transform(to.position());
    return make(p.x(), p.y(), to.yaw - from.yaw);
  }

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

}  // namespace driftnav
