#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftnav/control/plan.hpp"
#include "driftnav/eval/metrics.hpp"
#include "driftnav/ppo/policy.hpp"
#include "driftnav/scene/scenario.hpp"

namespace driftnav::eval {

struct BenchmarkConfig {
  std::vector<double> lidar_ranges{45.0, 50.0, 55.0};
  int seeds{20};
  std::uint64_t base_seed{1000};  // run seeds are base_seed + k, shared by all arms
  control::PlanConfig plan;
  double static_speed{3.0};  // cruise speed when a scene has no traffic
  mdp::EvalConfig eval;      // per-run fields (range, filtering, seed, speed) are overwritten
  int jobs{1};
  void validate() const;
};

/// Static scenes run LADFN and Vanilla only; filtering has nothing to remove.
std::vector<Arm> arms_for(const scene::Scenario& scenario);
/// Mean traffic speed, or static_speed for a scene without traffic.
double cruise_speed(const scene::Scenario& scenario, double static_speed);

/// One run. Never throws on simulation failures: they come back as reports
/// with an "error: ..." outcome and no metrics.
TrajectoryReport run_arm(const scene::Scenario& scenario, Arm arm, double lidar_range, std::uint64_t seed,
                         const ppo::ActorCritic& net, const BenchmarkConfig& config,
                         std::vector<mdp::EvalSample>* trajectory = nullptr);

struct Stat {
  int n{0};
  double mean{0.0};  // 0 and undefined when n = 0
  std::optional<double> std;  // sample standard deviation, undefined for n < 2
  bool operator==(const Stat&) const = default;
};
Stat summarize(std::span<const double> values);

enum class Metric { AverageDrift, FinalDrift, RotationalOffset };
inline constexpr Metric kAllMetrics[] = {Metric::AverageDrift, Metric::FinalDrift, Metric::RotationalOffset};
std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view name);

struct BenchmarkCell {
  std::string scenario;
  Arm arm{Arm::Ladfn};
  double lidar_range{50.0};
  int seeds{0};
  int collisions{0};
  int lane_breaches{0};
  int goals{0};
  Stat average_drift;
  Stat final_drift;
  Stat rotational_offset;
  [[nodiscard]] const Stat& stat(Metric m) const noexcept;
  Stat& stat(Metric m) noexcept;
  bool operator==(const BenchmarkCell&) const = default;
};

struct BenchmarkTable {
  std::vector<BenchmarkCell> cells;  // ordered by scenario, range, arm
  [[nodiscard]] const BenchmarkCell* find(const std::string& scenario, Arm arm, double lidar_range) const;
  [[nodiscard]] std::vector<std::string> scenarios() const;
  [[nodiscard]] std::vector<double> ranges(const std::string& scenario) const;
  bool operator==(const BenchmarkTable&) const = default;
};

BenchmarkTable aggregate(std::span<const TrajectoryReport> runs);

/// baseline mean / method mean for one cell; absent when either side has
/// no metric values or the method mean is zero.
std::optional<double> improvement_factor(const BenchmarkTable& table, const std::string& scenario, double lidar_range,
                                         Arm method, Metric metric = Metric::AverageDrift);
/// Mean over ranges of the per-range cell means.
std::optional<double> scenario_mean(const BenchmarkTable& table, const std::string& scenario, Arm arm,
                                    Metric metric = Metric::AverageDrift);
std::optional<double> scenario_improvement(const BenchmarkTable& table, const std::string& scenario, Arm method,
                                           Metric metric = Metric::AverageDrift);

struct BenchmarkResult {
  BenchmarkTable table;
  std::vector<TrajectoryReport> runs;
};

using BenchmarkProgress = std::function<void(const TrajectoryReport&, std::size_t done, std::size_t total)>;

/// Every (scenario, range, seed, arm) run; independent runs spread over
/// config.jobs threads. Results are independent of the thread count.
BenchmarkResult run_benchmark(std::span<const scene::Scenario> scenarios, const ppo::ActorCritic& net,
                              const BenchmarkConfig& config, const BenchmarkProgress& progress = {});

}  // namespace driftnav::eval
