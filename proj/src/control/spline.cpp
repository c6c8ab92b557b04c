#include "driftnav/control/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace driftnav::control {

namespace {

// Natural cubic spline second derivatives via the Thomas algorithm.
std::vector<double> natural_moments(const std::vector<double>& t, const std::vector<double>& v) {
  const std::size_t n = t.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0);
  }
  // lower[i] == upper[i - 1] (symmetric system)
  for (std::size_t i = 1; i < k; ++i) {
    const double w = upper[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
  return m;
}

constexpr std::array<double, 8> kGaussNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

}  // namespace

SplinePath::SplinePath(const std::vector<Vec2>& waypoints) {
  if (waypoints.size() < 2) throw std::invalid_argument("a path needs at least two waypoints");
  knot_t_.push_back(0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double chord = (waypoints[i] - waypoints[i - 1]).norm();
    if (chord < 1e-9) throw DuplicateWaypoint("waypoint " + std::to_string(i) + " repeats its predecessor");
    knot_t_.push_back(knot_t_.back() + chord);
  }
  std::vector<double> xs, ys;
  for (const auto& w : waypoints) {
    xs.push_back(w.x());
    ys.push_back(w.y());
  }
  const auto mx = natural_moments(knot_t_, xs);
  const auto my = natural_moments(knot_t_, ys);
  auto build = [&](const std::vector<double>& v, const std::vector<double>& m, std::vector<Cubic>& out) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double h = knot_t_[i + 1] - knot_t_[i];
      out.push_back({v[i], (v[i + 1] - v[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0, 0.5 * m[i],
                     (m[i + 1] - m[i]) / (6.0 * h)});
    }
  };
  build(xs, mx, px_);
  build(ys, my, py_);

  knot_s_.push_back(0.0);
  for (std::size_t i = 0; i < px_.size(); ++i)
    knot_s_.push_back(knot_s_.back() + piece_arc(i, knot_t_[i + 1] - knot_t_[i]));

  const auto count = static_cast<std::size_t>(std::floor(length() / kResolution));
  samples_.reserve(count + 2);
  for (std::size_t k = 0; k <= count; ++k) samples_.push_back(at(static_cast<double>(k) * kResolution));
  if (length() - samples_.back().s > 1e-9) samples_.push_back(at(length()));
}

std::size_t SplinePath::piece(double t) const {
  const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knot_t_.begin() - 1, 0));
  return std::min(idx, px_.size() - 1);
}

double SplinePath::speed(std::size_t i, double u) const {
  const auto& x = px_[i];
  const auto& y = py_[i];
  const double dx = x.b + 2.0 * x.c * u + 3.0 * x.d * u * u;
  const double dy = y.b + 2.0 * y.c * u + 3.0 * y.d * u * u;
  return std::hypot(dx, dy);
}

double SplinePath::piece_arc(std::size_t i, double u) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) sum += kGaussWeights[k] * speed(i, 0.5 * u * (kGaussNodes[k] + 1.0));
  return 0.5 * u * sum;
}

double SplinePath::parameter_at(double s, std::size_t& i) const {
  s = std::clamp(s, 0.0, length());
  const auto it = std::upper_bound(knot_s_.begin(), knot_s_.end(), s);
  i = std::min(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knot_s_.begin() - 1, 0)), px_.size() - 1);
  const double h = knot_t_[i + 1] - knot_t_[i];
  const double span = knot_s_[i + 1] - knot_s_[i];
  const double target = s - knot_s_[i];
  double u = span > 0.0 ? h * target / span : 0.0;
  for (int iter = 0; iter < 20 && target > 0.0; ++iter) {
    const double err = piece_arc(i, u) - target;
    if (std::abs(err) < 1e-12) break;
    u = std::clamp(u - err / std::max(speed(i, u), 1e-9), 0.0, h);
  }
  return u;
}

PathSample SplinePath::sample_t(std::size_t i, double u, double s) const {
  const auto& x = px_[i];
  const auto& y = py_[i];
  const double dx = x.b + 2.0 * x.c * u + 3.0 * x.d * u * u;
  const double dy = y.b + 2.0 * y.c * u + 3.0 * y.d * u * u;
  const double ddx = 2.0 * x.c + 6.0 * x.d * u;
  const double ddy = 2.0 * y.c + 6.0 * y.d * u;
  const double v = std::hypot(dx, dy);
  PathSample p;
  p.s = s;
  p.x = x.a + u * (x.b + u * (x.c + u * x.d));
  p.y = y.a + u * (y.b + u * (y.c + u * y.d));
  p.heading = std::atan2(dy, dx);
  p.curvature = v > 0.0 ? (dx * ddy - dy * ddx) / (v * v * v) : 0.0;
  return p;
}

PathSample SplinePath::at(double s) const {
  std::size_t i = 0;
  const double u = parameter_at(s, i);
  return sample_t(i, u, std::clamp(s, 0.0, length()));
}

Vec2 SplinePath::position_t(double t) const {
  const std::size_t i = piece(t);
  const double u = t - knot_t_[i];
  return {px_[i].a + u * (px_[i].b + u * (px_[i].c + u * px_[i].d)),
          py_[i].a + u * (py_[i].b + u * (py_[i].c + u * py_[i].d))};
}

Vec2 SplinePath::second_derivative_t(double t) const {
  const std::size_t i = piece(t);
  const double u = t - knot_t_[i];
  return {2.0 * px_[i].c + 6.0 * px_[i].d * u, 2.0 * py_[i].c + 6.0 * py_[i].d * u};
}

SplinePath fit_spline(const std::vector<Vec2>& waypoints) {
  if (waypoints.size() < 3) throw std::invalid_argument("fit_spline needs at least 3 waypoints");
  return SplinePath(waypoints);
}

}  // namespace driftnav::control
