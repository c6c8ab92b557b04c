#pragma once

#include <stdexcept>
#include <vector>

#include "driftnav/core/pose.hpp"
#include "driftnav/lidar/lidar.hpp"

namespace driftnav::odometry {

struct EdgeFeatureConfig {
  double curvature_threshold{0.15};
  int neighbors{5};  // ring neighbors examined on each side
};

struct EdgeFeatureSet {
  std::vector<Vec2> points;  // sensor frame
  std::vector<double> scores;
};

class EmptyFeatures : public std::runtime_error {
 public:
  EmptyFeatures() : std::runtime_error("edge feature set is empty") {}
};

/// Local smoothness of every ray: ||sum_j (p_i - p_j)|| / (k * range_i) over
/// the hit neighbors within k ring steps on each side. Misses contribute no
/// term. A point with no hit neighbor on one side (a boundary or an isolated
/// return) scores +inf. Misses score NaN.
std::vector<double> smoothness_scores(const lidar::LidarScan& scan, int k);

EdgeFeatureSet extract_edge_features(const lidar::LidarScan& scan, const EdgeFeatureConfig& config = {});

/// Mean y of the features mapped through pose_est. Throws EmptyFeatures.
double compute_feature_centroid_y(const EdgeFeatureSet& features, const Pose2D& pose_est);

}  // namespace driftnav::odometry
