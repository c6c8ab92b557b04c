#include "driftnav/odometry/icp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace driftnav::odometry {

std::vector<Vec2> hit_points(const lidar::LidarScan& scan) {
  std::vector<Vec2> out;
  out.reserve(scan.points.size());
  for (const auto& p : scan.points)
    if (p.hit()) out.push_back(p.local());
  return out;
}

namespace {

// Uniform grid over the reference points; cell size equals the query radius
// so a 3x3 neighborhood covers every candidate.
class GridIndex {
 public:
  GridIndex(const std::vector<Vec2>& pts, double cell) : pts_(pts), cell_(cell) {
    min_ = pts.front();
    Vec2 max = pts.front();
    for (const auto& p : pts) {
      min_ = min_.cwiseMin(p);
      max = max.cwiseMax(p);
    }
    nx_ = static_cast<int>(std::floor((max.x() - min_.x()) / cell_)) + 1;
    ny_ = static_cast<int>(std::floor((max.y() - min_.y()) / cell_)) + 1;
    start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
    std::vector<int> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = cell_index(cell_x(pts[i].x()), cell_y(pts[i].y()));
      ++start_[static_cast<std::size_t>(cell_of[i]) + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(pts.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell_of[i])]++)] = static_cast<int>(i);
  }

  // Up to k nearest points within radius, closest first; returns how many.
  int nearest(const Vec2& q, double radius, int k, int* out, double* dist) const {
    const int cx = cell_x(q.x());
    const int cy = cell_y(q.y());
    int found = 0;
    const double r2 = radius * radius;
    for (int ix = std::max(cx - 1, 0); ix <= std::min(cx + 1, nx_ - 1); ++ix) {
      for (int iy = std::max(cy - 1, 0); iy <= std::min(cy + 1, ny_ - 1); ++iy) {
        const int c = cell_index(ix, iy);
        for (int m = start_[static_cast<std::size_t>(c)]; m < start_[static_cast<std::size_t>(c) + 1]; ++m) {
          const int idx = items_[static_cast<std::size_t>(m)];
          const double d = (pts_[static_cast<std::size_t>(idx)] - q).squaredNorm();
          if (d >= r2 || (found == k && d >= dist[k - 1])) continue;
          int pos = found < k ? found++ : k - 1;
          while (pos > 0 && dist[pos - 1] > d) {
            dist[pos] = dist[pos - 1];
            out[pos] = out[pos - 1];
            --pos;
          }
          dist[pos] = d;
          out[pos] = idx;
        }
      }
    }
    return found;
  }

 private:
  int cell_x(double x) const { return static_cast<int>(std::floor((x - min_.x()) / cell_)); }
  int cell_y(double y) const { return static_cast<int>(std::floor((y - min_.y()) / cell_)); }
  int cell_index(int ix, int iy) const { return ix * ny_ + iy; }

  const std::vector<Vec2>& pts_;
  double cell_;
  Vec2 min_;
  int nx_{0};
  int ny_{0};
  std::vector<int> start_;
  std::vector<int> items_;
};

// Line through the selected reference points: exact for two, total least
// squares otherwise. Rejects spread-out or non-linear neighborhoods.
bool fit_line(const std::vector<Vec2>& ref, const int* ids, int n, double max_span, Vec2& anchor, Vec2& normal) {
  if (n == 2) {
    anchor = ref[static_cast<std::size_t>(ids[0])];
    const Vec2 dir = ref[static_cast<std::size_t>(ids[1])] - anchor;
    const double span = dir.norm();
    if (span < 1e-9 || span > max_span) return false;
    normal = Vec2(-dir.y() / span, dir.x() / span);
    return true;
  }
  anchor = Vec2::Zero();
  for (int i = 0; i < n; ++i) anchor += ref[static_cast<std::size_t>(ids[i])];
  anchor /= static_cast<double>(n);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  double span = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 d = ref[static_cast<std::size_t>(ids[i])] - anchor;
    cov += d * d.transpose();
    span = std::max(span, d.norm());
  }
  if (2.0 * span > max_span) return false;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const double minor = eig.eigenvalues()(0);
  const double major = eig.eigenvalues()(1);
  if (major <= 1e-18 || minor > 0.1 * major) return false;
  normal = eig.eigenvectors().col(0);
  return true;
}

struct Linearization {
  double error{std::numeric_limits<double>::infinity()};
  std::size_t count{0};
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
};

Linearization linearize(const GridIndex& index, const std::vector<Vec2>& ref, const std::vector<Vec2>& cur,
                        const Eigen::Vector3d& xi, const IcpConfig& config, double gate) {
  Linearization lin;
  const double c = std::cos(xi.z());
  const double s = std::sin(xi.z());
  double sum = 0.0;
  const int k = std::clamp(config.line_neighbors, 2, 16);
  std::array<int, 16> ids{};
  std::array<double, 16> dists{};
  for (const auto& q : cur) {
    const Vec2 p(c * q.x() - s * q.y() + xi.x(), s * q.x() + c * q.y() + xi.y());
    int found = index.nearest(p, config.max_correspondence, k, ids.data(), dists.data());
    if (found < 2) continue;
    Vec2 anchor;
    Vec2 normal;
    if (!fit_line(ref, ids.data(), found, config.max_line_span, anchor, normal)) continue;
    const double r = normal.dot(p - anchor);
    if (gate > 0.0 && std::abs(r) > gate) continue;
    const Vec2 dp_dtheta(-s * q.x() - c * q.y(), c * q.x() - s * q.y());
    const Eigen::Vector3d J(normal.x(), normal.y(), normal.dot(dp_dtheta));
    lin.H += J * J.transpose();
    lin.g += J * r;
    sum += r * r;
    ++lin.count;
  }
  if (lin.count > 0) lin.error = sum / static_cast<double>(lin.count);
  return lin;
}

}  // namespace

IcpResult match_scans(const lidar::LidarScan& prev, const lidar::LidarScan& cur, const Pose2D& init_guess,
                      const IcpConfig& config) {
  const auto ref = hit_points(prev);
  const auto pts = hit_points(cur);
  if (ref.size() < config.min_points || pts.size() < config.min_points)
    throw DegenerateScan("scan has fewer than " + std::to_string(config.min_points) + " usable points");

  const GridIndex index(ref, config.max_correspondence);
  Eigen::Vector3d xi(init_guess.x, init_guess.y, init_guess.yaw);

  IcpResult result;
  Linearization lin = linearize(index, ref, pts, xi, config, 0.0);
  if (lin.count < config.min_points) throw DegenerateScan("too few correspondences");
  result.error_history.push_back(lin.error);

  auto solve = [&](double gate) {
    for (int it = 0; it < config.max_iterations; ++it) {
      ++result.iterations;
      // Tiny damping keeps unobservable directions (e.g. along a corridor) at the prior.
      const Eigen::Matrix3d H = lin.H + 1e-9 * (1.0 + lin.H.trace()) * Eigen::Matrix3d::Identity();
      Eigen::Vector3d delta = -H.ldlt().solve(lin.g);
      if (!delta.allFinite()) return;

      bool accepted = false;
      for (int halving = 0; halving < 8; ++halving) {
        Linearization trial = linearize(index, ref, pts, xi + delta, config, gate);
        if (trial.count >= config.min_points && trial.error <= lin.error) {
          xi += delta;
          lin = trial;
          accepted = true;
          break;
        }
        delta *= 0.5;
      }
      if (!accepted) {
        result.converged = true;
        return;
      }
      result.error_history.push_back(lin.error);
      if (delta.norm() < config.convergence) {
        result.converged = true;
        return;
      }
    }
  };

  solve(0.0);
  if (config.residual_gate > 0.0) {
    Linearization gated = linearize(index, ref, pts, xi, config, config.residual_gate);
    if (gated.count >= config.min_points) {
      lin = gated;
      result.error_history.push_back(lin.error);
      result.converged = false;
      solve(config.residual_gate);
    }
  }
  result.transform = Pose2D::make(xi.x(), xi.y(), xi.z());
  result.correspondences = lin.count;
  return result;
}

}  // namespace driftnav::odometry
