#include "driftnav/odometry/features.hpp"

#include <cmath>
#include <limits>

namespace driftnav::odometry {

std::vector<double> smoothness_scores(const lidar::LidarScan& scan, int k) {
  const auto n = static_cast<long>(scan.points.size());
  std::vector<double> scores(scan.points.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<Vec2> local(scan.points.size(), Vec2::Zero());
  for (std::size_t i = 0; i < scan.points.size(); ++i)
    if (scan.points[i].hit()) local[i] = scan.points[i].local();

  for (long i = 0; i < n; ++i) {
    const auto& p = scan.points[static_cast<std::size_t>(i)];
    if (!p.hit()) continue;
    Vec2 sum = Vec2::Zero();
    bool left = false;
    bool right = false;
    for (long j = 1; j <= k && j < n; ++j) {
      const auto a = static_cast<std::size_t>((i - j + n) % n);
      const auto b = static_cast<std::size_t>((i + j) % n);
      if (scan.points[a].hit()) {
        sum += local[static_cast<std::size_t>(i)] - local[a];
        left = true;
      }
      if (scan.points[b].hit()) {
        sum += local[static_cast<std::size_t>(i)] - local[b];
        right = true;
      }
    }
    scores[static_cast<std::size_t>(i)] =
        (left && right) ? sum.norm() / (static_cast<double>(k) * p.range) : std::numeric_limits<double>::infinity();
  }
  return scores;
}

EdgeFeatureSet extract_edge_features(const lidar::LidarScan& scan, const EdgeFeatureConfig& config) {
  EdgeFeatureSet out;
  const auto scores = smoothness_scores(scan, config.neighbors);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (!scan.points[i].hit()) continue;
    if (scores[i] > config.curvature_threshold) {
      out.points.push_back(scan.points[i].local());
      out.scores.push_back(scores[i]);
    }
  }
  return out;
}

double compute_feature_centroid_y(const EdgeFeatureSet& features, const Pose2D& pose_est) {
  if (features.points.empty()) throw EmptyFeatures();
  double sum = 0.0;
  for (const auto& p : features.points) sum += pose_est.transform(p).y();
  return sum / static_cast<double>(features.points.size());
}

}  // namespace driftnav::odometry
