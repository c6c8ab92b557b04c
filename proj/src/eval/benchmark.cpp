#include "driftnav/eval/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "driftnav/core/error.hpp"

namespace driftnav::eval {

void BenchmarkConfig::validate() const {
  if (lidar_ranges.empty()) throw ValidationError("ranges", "must not be empty");
  for (double r : lidar_ranges)
    if (!(r > 0.0)) throw ValidationError("ranges", "must be positive");
  if (seeds < 1) throw ValidationError("seeds", "must be at least 1");
  if (!(static_speed > 0.0)) throw ValidationError("static_speed", "must be positive");
  if (jobs < 1) throw ValidationError("jobs", "must be at least 1");
  plan.validate();
  eval.validate();
}

std::vector<Arm> arms_for(const scene::Scenario& scenario) {
  if (scenario.is_static()) return {Arm::Ladfn, Arm::Vanilla};
  return {std::begin(kAllArms), std::end(kAllArms)};
}

double cruise_speed(const scene::Scenario& scenario, double static_speed) {
  if (scenario.traffic.empty()) return static_speed;
  double sum = 0.0;
  for (const auto& t : scenario.traffic) sum += t.speed;
  return sum / static_cast<double>(scenario.traffic.size());
}

TrajectoryReport run_arm(const scene::Scenario& scenario, Arm arm, double lidar_range, std::uint64_t seed,
                         const ppo::ActorCritic& net, const BenchmarkConfig& config,
                         std::vector<mdp::EvalSample>* trajectory) {
  const double speed = cruise_speed(scenario, config.static_speed);
  mdp::EvalConfig ec = config.eval;
  ec.lidar.max_range = lidar_range;
  ec.filtering = is_filtered(arm) ? odometry::Filtering::On : odometry::Filtering::Off;
  ec.seed = seed;
  ec.initial_speed = speed;
  try {
    mdp::EvalEnvironment env(scenario, ec);
    if (is_ladfn(arm))
      control::plan_and_track(net, env, config.plan);
    else
      control::track_centerline(env, speed);
    if (trajectory) *trajectory = env.samples();
    return report_run(env, arm);
  } catch (const std::exception& e) {
    TrajectoryReport r;
    r.scenario = scenario.name;
    r.arm = arm;
    r.lidar_range = lidar_range;
    r.seed = seed;
    r.outcome = std::string("error: ") + e.what();
    return r;
  }
}

Stat summarize(std::span<const double> values) {
  Stat s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::AverageDrift: return "average_drift";
    case Metric::FinalDrift: return "final_drift";
    case Metric::RotationalOffset: return "rotational_offset";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

const Stat& BenchmarkCell::stat(Metric m) const noexcept {
  switch (m) {
    case Metric::FinalDrift: return final_drift;
    case Metric::RotationalOffset: return rotational_offset;
    default: return average_drift;
  }
}

Stat& BenchmarkCell::stat(Metric m) noexcept {
  return const_cast<Stat&>(static_cast<const BenchmarkCell&>(*this).stat(m));
}

const BenchmarkCell* BenchmarkTable::find(const std::string& scenario, Arm arm, double lidar_range) const {
  for (const auto& c : cells)
    if (c.scenario == scenario && c.arm == arm && c.lidar_range == lidar_range) return &c;
  return nullptr;
}

std::vector<std::string> BenchmarkTable::scenarios() const {
  std::vector<std::string> out;
  for (const auto& c : cells)
    if (std::find(out.begin(), out.end(), c.scenario) == out.end()) out.push_back(c.scenario);
  return out;
}

std::vector<double> BenchmarkTable::ranges(const std::string& scenario) const {
  std::vector<double> out;
  for (const auto& c : cells)
    if (c.scenario == scenario && std::find(out.begin(), out.end(), c.lidar_range) == out.end())
      out.push_back(c.lidar_range);
  return out;
}

BenchmarkTable aggregate(std::span<const TrajectoryReport> runs) {
  using Key = std::tuple<std::string, double, int>;
  std::map<Key, std::vector<const TrajectoryReport*>> groups;
  for (const auto& r : runs) groups[{r.scenario, r.lidar_range, static_cast<int>(r.arm)}].push_back(&r);

  BenchmarkTable table;
  for (const auto& [key, members] : groups) {
    BenchmarkCell cell;
    cell.scenario = std::get<0>(key);
    cell.lidar_range = std::get<1>(key);
    cell.arm = static_cast<Arm>(std::get<2>(key));
    cell.seeds = static_cast<int>(members.size());
    std::vector<double> avg, fin, rot;
    for (const auto* r : members) {
      cell.collisions += r->collided;
      cell.lane_breaches += r->lane_breach;
      cell.goals += r->goal_reached;
      if (!r->metrics) continue;
      avg.push_back(r->metrics->average_drift);
      fin.push_back(r->metrics->final_drift);
      rot.push_back(r->metrics->rotational_offset);
    }
    cell.average_drift = summarize(avg);
    cell.final_drift = summarize(fin);
    cell.rotational_offset = summarize(rot);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

namespace {

std::optional<double> ratio(std::optional<double> baseline, std::optional<double> method) {
  if (!baseline || !method || *method == 0.0) return std::nullopt;
  return *baseline / *method;
}

std::optional<double> cell_mean(const BenchmarkCell* c, Metric metric) {
  if (!c || c->stat(metric).n == 0) return std::nullopt;
  return c->stat(metric).mean;
}

}  // namespace

std::optional<double> improvement_factor(const BenchmarkTable& table, const std::string& scenario, double lidar_range,
                                         Arm method, Metric metric) {
  return ratio(cell_mean(table.find(scenario, baseline_of(method), lidar_range), metric),
               cell_mean(table.find(scenario, method, lidar_range), metric));
}

std::optional<double> scenario_mean(const BenchmarkTable& table, const std::string& scenario, Arm arm,
                                    Metric metric) {
  double sum = 0.0;
  int n = 0;
  for (double r : table.ranges(scenario)) {
    const auto m = cell_mean(table.find(scenario, arm, r), metric);
    if (!m) return std::nullopt;
    sum += *m;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::optional<double> scenario_improvement(const BenchmarkTable& table, const std::string& scenario, Arm method,
                                           Metric metric) {
  return ratio(scenario_mean(table, scenario, baseline_of(method), metric),
               scenario_mean(table, scenario, method, metric));
}

BenchmarkResult run_benchmark(std::span<const scene::Scenario> scenarios, const ppo::ActorCritic& net,
                              const BenchmarkConfig& config, const BenchmarkProgress& progress) {
  config.validate();
  net.check_shapes();
  struct Job {
    const scene::Scenario* scenario;
    Arm arm;
    double range;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& sc : scenarios)
    for (double range : config.lidar_ranges)
      for (int k = 0; k < config.seeds; ++k)
        for (Arm arm : arms_for(sc)) jobs.push_back({&sc, arm, range, config.base_seed + static_cast<std::uint64_t>(k)});

  BenchmarkResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::mutex mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      TrajectoryReport r = run_arm(*j.scenario, j.arm, j.range, j.seed, net, config);
      std::lock_guard lock(mutex);
      result.runs[i] = std::move(r);
      ++finished;
      if (progress) progress(result.runs[i], finished, jobs.size());
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.table = aggregate(result.runs);
  return result;
}

}  // namespace driftnav::eval
