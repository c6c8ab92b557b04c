#pragma once

#include <stdexcept>
#include <vector>

#include "driftnav/core/pose.hpp"
#include "driftnav/lidar/lidar.hpp"

namespace driftnav::odometry {

struct IcpConfig {
  int max_iterations{50};
  double convergence{1e-6};      // stop when the update norm falls below this
  double max_correspondence{1.0};  // m
  double max_line_span{2.0};     // m, the two anchor points must be closer than this
  std::size_t min_points{10};
  int line_neighbors{5};  // nearest reference hits fitted by each correspondence line (>= 2)
  double residual_gate{0.1};  // m; after convergence, refine without residuals above this (0 disables)
};

/// Fewer usable points than IcpConfig::min_points in either scan.
class DegenerateScan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IcpResult {
  Pose2D transform;  // pose of the current sensor frame in the previous one
  int iterations{0};
  bool converged{false};
  std::size_t correspondences{0};
  std::vector<double> error_history;  // mean squared point-to-line residual per accepted iterate
};

/// Point-to-line ICP. Each current hit is associated with the line fitted
/// through its nearest previous hits (exactly the two nearest when
/// line_neighbors == 2); Gauss-Newton with step halving, so the recorded
/// error never increases. A refinement stage then drops correspondences
/// whose residual exceeds residual_gate; those are larger than every kept
/// residual, so the error stays monotone across the switch.
IcpResult match_scans(const lidar::LidarScan& prev, const lidar::LidarScan& cur, const Pose2D& init_guess,
                      const IcpConfig& config = {});

std::vector<Vec2> hit_points(const lidar::LidarScan& scan);

}  // namespace driftnav::odometry
