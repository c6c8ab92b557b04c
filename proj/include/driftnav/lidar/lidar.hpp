#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "driftnav/core/pose.hpp"
#include "driftnav/scene/world.hpp"

namespace driftnav::lidar {

inline constexpr double kMiss = std::numeric_limits<double>::infinity();
inline constexpr double kFeatureDiscRadius = 0.05;

struct LidarConfig {
  int n_rays{720};
  double max_range{50.0};
  double noise_sigma{0.02};

  /// Throws ValidationError on bad values.
  void validate() const;
  [[nodiscard]] double angular_step() const noexcept;
};

enum class Source : std::uint8_t { None, Static, Traffic };

struct ScanPoint {
  double bearing{0.0};  // sensor frame
  double range{kMiss};
  Source source{Source::None};
  int traffic_id{-1};

  [[nodiscard]] bool hit() const noexcept { return range != kMiss; }
  /// Hit position in the sensor frame. Only meaningful when hit().
  [[nodiscard]] Vec2 local() const noexcept;
};

struct LidarScan {
  Pose2D sensor_pose;  // ground truth; the simulator's bookkeeping only
  std::vector<ScanPoint> points;
  int step_index{0};

  [[nodiscard]] std::size_t hit_count() const noexcept;
  [[nodiscard]] std::size_t count(Source source) const noexcept;
};

/// Static feature points indexed for range queries plus the current traffic.
class World {
 public:
  World() = default;
  explicit World(std::vector<scene::FeaturePoint> statics, scene::TrafficState traffic = {});

  void set_traffic(scene::TrafficState traffic) { traffic_ = std::move(traffic); }
  [[nodiscard]] const scene::TrafficState& traffic() const noexcept { return traffic_; }
  [[nodiscard]] std::span<const scene::FeaturePoint> statics() const noexcept { return statics_; }

  /// Statics with x in [x_min, x_max].
  [[nodiscard]] std::span<const scene::FeaturePoint> statics_in_x(double x_min, double x_max) const;

 private:
  std::vector<scene::FeaturePoint> statics_;  // sorted by x
  scene::TrafficState traffic_;
};

/// One revolution of uniformly spaced rays from sensor_pose. Nearest hit
/// wins, so traffic occludes structure behind it. Range noise is drawn once
/// per ray from `seed`, hit or not, so paired runs share noise streams.
LidarScan cast_scan(const World& world, const Pose2D& sensor_pose, const LidarConfig& config,
                    std::uint64_t seed, int step_index = 0);

/// Replaces every traffic return by a miss.
LidarScan filter_dynamic(const LidarScan& scan);

/// Row-per-point log: step,ray,bearing,range,label (range empty on miss).
void write_scan_csv(std::ostream& out, std::span<const LidarScan> scans);

}  // namespace driftnav::lidar
