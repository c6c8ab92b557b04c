#include "driftnav/lidar/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "driftnav/core/error.hpp"

namespace driftnav::lidar {

void LidarConfig::validate() const {
  if (n_rays < 8) throw ValidationError("n_rays", "must be at least 8");
  if (!(max_range > 0.0)) throw ValidationError("max_range", "must be positive");
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma", "must be non-negative");
}

double LidarConfig::angular_step() const noexcept {
  return 2.0 * std::numbers::pi / static_cast<double>(n_rays);
}

Vec2 ScanPoint::local() const noexcept { return {range * std::cos(bearing), range * std::sin(bearing)}; }

std::size_t LidarScan::hit_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return p.hit(); }));
}

std::size_t LidarScan::count(Source source) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [&](const ScanPoint& p) { return p.hit() && p.source == source; }));
}

World::World(std::vector<scene::FeaturePoint> statics, scene::TrafficState traffic)
    : statics_(std::move(statics)), traffic_(std::move(traffic)) {
  std::stable_sort(statics_.begin(), statics_.end(),
                   [](const scene::FeaturePoint& a, const scene::FeaturePoint& b) { return a.position.x() < b.position.x(); });
}

std::span<const scene::FeaturePoint> World::statics_in_x(double x_min, double x_max) const {
  auto lo = std::lower_bound(statics_.begin(), statics_.end(), x_min,
                             [](const scene::FeaturePoint& p, double v) { return p.position.x() < v; });
  auto hi = std::upper_bound(lo, statics_.end(), x_max,
                             [](double v, const scene::FeaturePoint& p) { return v < p.position.x(); });
  return {lo, hi};
}

namespace {

// Distance along a unit ray from origin o to an axis-aligned square, or kMiss.
double ray_box(const Vec2& o, const Vec2& dir, const Vec2& center, double half) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = center[axis] - half;
    const double hi = center[axis] + half;
    if (std::abs(dir[axis]) < 1e-15) {
      if (o[axis] < lo || o[axis] > hi) return kMiss;
      continue;
    }
    double t0 = (lo - o[axis]) / dir[axis];
    double t1 = (hi - o[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return kMiss;
  }
  if (t_far < 0.0) return kMiss;
  return t_near >= 0.0 ? t_near : kMiss;  // sensor inside the box sees nothing of it
}

}  // namespace

LidarScan cast_scan(const World& world, const Pose2D& sensor_pose, const LidarConfig& config,
                    std::uint64_t seed, int step_index) {
  config.validate();
  const int n = config.n_rays;
  const double step = config.angular_step();
  const double max_range = config.max_range;

  LidarScan scan;
  scan.sensor_pose = sensor_pose;
  scan.step_index = step_index;
  scan.points.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) scan.points[static_cast<std::size_t>(i)].bearing = wrap_angle(i * step);

  // Feature discs: only rays inside each disc's angular footprint are tested.
  const double r = kFeatureDiscRadius;
  const Vec2 origin = sensor_pose.position();
  for (const auto& fp : world.statics_in_x(origin.x() - max_range - r, origin.x() + max_range + r)) {
    const Vec2 local = sensor_pose.inverse_transform(fp.position);
    const double d = local.norm();
    if (d <= r || d - r > max_range) continue;
    const double phi = std::atan2(local.y(), local.x());
    const double alpha = std::asin(r / d);
    const auto i_lo = static_cast<long>(std::ceil((phi - alpha) / step));
    const auto i_hi = static_cast<long>(std::floor((phi + alpha) / step));
    for (long i = i_lo; i <= i_hi; ++i) {
      const double delta = static_cast<double>(i) * step - phi;
      const double perp = d * std::sin(delta);
      const double disc = r * r - perp * perp;
      if (disc < 0.0) continue;
      const double t = d * std::cos(delta) - std::sqrt(disc);
      if (t < 0.0 || t > max_range) continue;
      auto& sp = scan.points[static_cast<std::size_t>(((i % n) + n) % n)];
      if (t < sp.range) {
        sp.range = t;
        sp.source = Source::Static;
        sp.traffic_id = -1;
      }
    }
  }

  for (const auto& agent : world.traffic()) {
    if (!agent.present) continue;
    const auto& v = agent.vehicle;
    const Vec2 center = v.pose.position();
    const double reach = max_range + v.footprint_half_extent * std::numbers::sqrt2;
    if ((center - origin).norm() > reach) continue;
    for (int i = 0; i < n; ++i) {
      auto& sp = scan.points[static_cast<std::size_t>(i)];
      const double heading = sensor_pose.yaw + sp.bearing;
      const Vec2 dir(std::cos(heading), std::sin(heading));
      const double t = ray_box(origin, dir, center, v.footprint_half_extent);
      if (t == kMiss || t > max_range) continue;
      if (t < sp.range) {
        sp.range = t;
        sp.source = Source::Traffic;
        sp.traffic_id = v.id;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& sp : scan.points) {
    const double e = noise(rng) * config.noise_sigma;
    if (!sp.hit()) continue;
    const double noisy = sp.range + e;
    if (noisy > max_range || noisy <= 0.0) {
      sp.range = kMiss;
      sp.source = Source::None;
      sp.traffic_id = -1;
    } else {
      sp.range = noisy;
    }
  }
  return scan;
}

LidarScan filter_dynamic(const LidarScan& scan) {
  LidarScan out = scan;
  for (auto& sp : out.points) {
    if (sp.source == Source::Traffic) {
      sp.range = kMiss;
      sp.source = Source::None;
      sp.traffic_id = -1;
    }
  }
  return out;
}

void write_scan_csv(std::ostream& out, std::span<const LidarScan> scans) {
  out << "step,ray,bearing,range,label\n";
  out.precision(17);
  for (const auto& scan : scans) {
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const auto& p = scan.points[i];
      out << scan.step_index << ',' << i << ',' << p.bearing << ',';
      if (p.hit()) out << p.range;
      out << ',';
      switch (p.source) {
        case Source::Static: out << "static"; break;
        case Source::Traffic: out << "traffic:" << p.traffic_id; break;
        case Source::None: out << "none"; break;
      }
      out << '\n';
    }
  }
}

}  // namespace driftnav::lidar
