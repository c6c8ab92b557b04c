#pragma once

#include <stdexcept>
#include <vector>

#include "driftnav/core/pose.hpp"

namespace driftnav::control {

class DuplicateWaypoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PathSample {
  double s{0.0};
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double curvature{0.0};
};

/// Natural cubic spline through the waypoints, parametrized by cumulative
/// chord length t, queried by arc length s.
class SplinePath {
 public:
  static constexpr double kResolution = 0.1;  // m between resampled points

  /// Throws DuplicateWaypoint for repeated consecutive points and
  /// std::invalid_argument for fewer than two waypoints.
  explicit SplinePath(const std::vector<Vec2>& waypoints);

  [[nodiscard]] double length() const noexcept { return knot_s_.back(); }
  [[nodiscard]] const std::vector<double>& knot_arc_lengths() const noexcept { return knot_s_; }
  [[nodiscard]] const std::vector<PathSample>& samples() const noexcept { return samples_; }

  [[nodiscard]] PathSample at(double s) const;
  /// Evaluation in the chord parameter (for derivative checks).
  [[nodiscard]] Vec2 position_t(double t) const;
  [[nodiscard]] Vec2 second_derivative_t(double t) const;
  [[nodiscard]] double parameter_length() const noexcept { return knot_t_.back(); }
  [[nodiscard]] const std::vector<double>& knot_parameters() const noexcept { return knot_t_; }

 private:
  struct Cubic {  // a + b u + c u^2 + d u^3, u = t - t_i
    double a, b, c, d;
  };
  std::size_t piece(double t) const;
  double speed(std::size_t i, double u) const;
  double piece_arc(std::size_t i, double u) const;
  double parameter_at(double s, std::size_t& piece_index) const;
  PathSample sample_t(std::size_t i, double u, double s) const;

  std::vector<double> knot_t_;
  std::vector<double> knot_s_;
  std::vector<Cubic> px_, py_;
  std::vector<PathSample> samples_;
};

/// Requires at least 3 waypoints (ego position plus unrolled waypoints).
SplinePath fit_spline(const std::vector<Vec2>& waypoints);

}  // namespace driftnav::control
