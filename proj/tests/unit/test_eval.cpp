#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "driftnav/control/plan.hpp"
#include "driftnav/core/error.hpp"
#include "driftnav/eval/benchmark.hpp"
#include "driftnav/eval/metrics.hpp"
#include "driftnav/eval/report.hpp"
#include "driftnav/eval/trajectory.hpp"
#include "driftnav/mdp/eval_env.hpp"
#include "driftnav/ppo/trainer.hpp"

using namespace driftnav;
using namespace driftnav::eval;

namespace {

scene::Scenario corridor(double length, std::vector<scene::TrafficVehicle> traffic = {}) {
  scene::Scenario s;
  s.name = traffic.empty() ? "corridor" : "corridor_traffic";
  s.road = {length, -6.0, 6.0};
  s.features.push_back({{Vec2(-40, -12), Vec2(length + 40, -12)}, 20.0});
  s.features.push_back({{Vec2(-40, 12), Vec2(length + 40, 12)}, 20.0});
  for (double x = 0.0; x < length; x += 6.0)
    s.features.push_back({{Vec2(x, -9), Vec2(x + 0.5, -9), Vec2(x + 0.5, -8.5), Vec2(x, -8.5), Vec2(x, -9)}, 20.0});
  s.traffic = std::move(traffic);
  s.seed = 5;
  return s;
}

mdp::EvalConfig eval_config(std::uint64_t seed, odometry::Filtering f = odometry::Filtering::Off) {
  mdp::EvalConfig c;
  c.seed = seed;
  c.filtering = f;
  return c;
}

TrajectoryReport run(const std::string& name, Arm arm, double range, std::uint64_t seed, double drift) {
  TrajectoryReport r;
  r.scenario = name;
  r.arm = arm;
  r.lidar_range = range;
  r.seed = seed;
  r.metrics = DriftMetrics{drift, 2 * drift, 0.01 * drift};
  r.goal_reached = true;
  r.outcome = "goal";
  return r;
}

const ppo::ActorCritic& trained_policy() {
  static const ppo::ActorCritic net = [] {
    ppo::TrainConfig c;
    c.total_steps = 60'000;
    c.seed = 17;
    return ppo::train(mdp::SamplerBounds{}, mdp::RewardConfig{}, c).net;
  }();
  return net;
}

}  // namespace

TEST_CASE("drift metric examples") {
  const std::vector<Pose2D> gt{{0, 0, 0}, {1, 0, 0.1}, {2, 1, 0.2}};
  CHECK(compute_drift(gt, gt) == DriftMetrics{0, 0, 0});

  std::vector<Pose2D> shifted;
  for (const auto& p : gt) shifted.push_back(Pose2D{p.x + 1.0, p.y, p.yaw});
  const auto m = compute_drift(shifted, gt);
  CHECK(m.average_drift == doctest::Approx(1.0));
  CHECK(m.final_drift == doctest::Approx(1.0));

  auto wrapped = gt;
  wrapped.back().yaw += 2.0 * std::numbers::pi;
  CHECK(compute_drift(wrapped, gt).rotational_offset == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<Pose2D> est{{0, 0, 0}, {1, 3, 0}, {2, 1, 0.5}};
  const auto e = compute_drift(est, gt);
  CHECK(e.average_drift == doctest::Approx(1.0));
  CHECK(e.final_drift == 0.0);
  CHECK(e.rotational_offset == doctest::Approx(0.3));

  CHECK_THROWS_AS(compute_drift(std::span(est).first(2), gt), LengthMismatch);
  CHECK_THROWS_AS(compute_drift({}, {}), std::invalid_argument);
}

TEST_CASE("interior permutations leave the final metrics alone") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Pose2D> est, gt;
    for (int i = 0; i < 30; ++i) {
      gt.push_back(Pose2D::make(i, g(rng), g(rng)));
      est.push_back(Pose2D::make(i + g(rng), g(rng), g(rng)));
    }
    const auto a = compute_drift(est, gt);
    std::vector<std::size_t> order(28);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    auto est_p = est;
    for (std::size_t i = 0; i < order.size(); ++i) est_p[i + 1] = est[order[i]];
    const auto b = compute_drift(est_p, gt);
    CHECK(a.final_drift == b.final_drift);
    CHECK(a.rotational_offset == b.rotational_offset);
    CHECK(a.average_drift >= 0.0);
  }
}

TEST_CASE("arm names") {
  for (Arm a : kAllArms) CHECK(parse_arm(to_string(a)) == a);
  CHECK(to_string(Arm::LadfnFiltered) == "ladfn+f");
  CHECK(baseline_of(Arm::LadfnFiltered) == Arm::VanillaFiltered);
  CHECK_THROWS_AS(parse_arm("ladfn-f"), std::invalid_argument);
}

TEST_CASE("summaries and degenerate seed counts") {
  const std::vector<double> one{0.4};
  const auto s1 = summarize(one);
  CHECK(s1.n == 1);
  CHECK(s1.mean == 0.4);
  CHECK_FALSE(s1.std.has_value());
  const std::vector<double> two{1.0, 3.0};
  CHECK(*summarize(two).std == doctest::Approx(std::sqrt(2.0)));
  CHECK(summarize({}).n == 0);
}

TEST_CASE("aggregation and improvement factors") {
  std::vector<TrajectoryReport> runs;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    runs.push_back(run("a", Arm::Ladfn, 45, seed, 0.5 + 0.1 * static_cast<double>(seed)));
    runs.push_back(run("a", Arm::Vanilla, 45, seed, 1.5 + 0.3 * static_cast<double>(seed)));
    runs.push_back(run("a", Arm::Ladfn, 55, seed, 1.0));
    runs.push_back(run("a", Arm::Vanilla, 55, seed, 2.0));
  }
  runs.back().collided = true;
  runs.back().metrics.reset();
  const auto table = aggregate(runs);
  const auto* cell = table.find("a", Arm::Ladfn, 45);
  REQUIRE(cell != nullptr);
  CHECK(cell->seeds == 4);
  CHECK(cell->average_drift.mean == doctest::Approx(0.65));
  CHECK(cell->final_drift.mean == doctest::Approx(1.3));
  const auto* van55 = table.find("a", Arm::Vanilla, 55);
  CHECK(van55->seeds == 4);
  CHECK(van55->collisions == 1);
  CHECK(van55->average_drift.n == 3);

  CHECK(*improvement_factor(table, "a", 45, Arm::Ladfn) == doctest::Approx(1.95 / 0.65));
  CHECK(*improvement_factor(table, "a", 55, Arm::Ladfn) == doctest::Approx(2.0));
  CHECK(*scenario_mean(table, "a", Arm::Vanilla) == doctest::Approx((1.95 + 2.0) / 2));
  CHECK(*scenario_improvement(table, "a", Arm::Ladfn) == doctest::Approx(((1.95 + 2.0) / 2) / ((0.65 + 1.0) / 2)));
  CHECK_FALSE(improvement_factor(table, "a", 50, Arm::Ladfn).has_value());
  CHECK(table.ranges("a") == std::vector<double>{45, 55});
}

TEST_CASE("table csv round-trips and marks collisions") {
  std::vector<TrajectoryReport> runs{run("s", Arm::Ladfn, 50, 1, 0.3), run("s", Arm::Vanilla, 50, 1, 0.9),
                                     run("t", Arm::LadfnFiltered, 45, 1, 1.0 / 3.0)};
  runs.push_back(run("t", Arm::LadfnFiltered, 45, 2, 0.7));
  runs.back().collided = true;
  const auto table = aggregate(runs);
  std::stringstream buf;
  write_table_csv(buf, table);
  const std::string text = buf.str();
  CHECK(text.find("undefined") != std::string::npos);  // single-seed std
  CHECK(text.find(",collision\n") != std::string::npos);
  CHECK(read_table_csv(buf) == table);

  std::istringstream bad("scenario,arm,lidar_range,metric,seeds,n,mean,std,collisions,lane_breaches,goals,marker\n"
                         "s,ladfn,50,average_drift,1,1,0.3,undefined,0,0,1,\n"
                         "s,ladfn,50,average_drift,1\n");
  try {
    read_table_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("summary carries improvement factors and the config echo") {
  const std::vector<TrajectoryReport> runs{run("s", Arm::Ladfn, 50, 1, 0.25), run("s", Arm::Vanilla, 50, 1, 1.0)};
  const auto doc = nlohmann::json::parse(summary_json(aggregate(runs), R"({"seeds": 1})"));
  CHECK(doc["config"]["seeds"] == 1);
  bool found = false;
  for (const auto& cell : doc["cells"])
    if (cell["arm"] == "ladfn") {
      CHECK(cell["improvement_factor"].get<double>() == doctest::Approx(4.0));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("report emission errors") {
  BenchmarkResult empty;
  CHECK_THROWS_AS(emit_report(empty, std::filesystem::temp_directory_path()), std::invalid_argument);
  BenchmarkResult one;
  one.runs = {run("s", Arm::Ladfn, 50, 1, 0.25)};
  one.table = aggregate(one.runs);
  CHECK_THROWS_AS(emit_report(one, "/proc/driftnav/report"), IoError);
}

TEST_CASE("trajectory csv round-trips with line-numbered errors") {
  std::vector<mdp::EvalSample> samples{{0.0, {0, 0, 0}, {0, 0, 0}, 0.0, 3.0},
                                       {0.05, {0.15, 0.001, 0.002}, {0.149, 0.0, 0.0021}, -0.1, 3.075}};
  std::stringstream buf;
  write_trajectory_csv(buf, samples);
  const auto back = read_trajectory_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[1].truth == samples[1].truth);
  CHECK(back[1].estimate == samples[1].estimate);
  CHECK(back[1].steer == samples[1].steer);

  std::istringstream empty("");
  CHECK(read_trajectory_csv(empty).empty());
  std::istringstream truncated("t,x_gt,y_gt,yaw_gt,x_est,y_est,yaw_est,steer,speed\n0,0,0,0,0,0,0,0,3\n0.05,0.1,0\n");
  try {
    read_trajectory_csv(truncated);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("centerline run on a static corridor reaches the goal") {
  mdp::EvalEnvironment env(corridor(60.0), eval_config(1));
  CHECK(env.samples().size() == 1);
  CHECK(env.odometry_log().size() == 1);
  const auto observed = env.observe();
  CHECK(observed.x_e == 0.0);
  CHECK(std::abs(observed.y_c_norm) <= 1.0);
  const auto result = control::track_centerline(env, 3.0);
  CHECK(result.status == mdp::EvalStatus::Goal);
  CHECK(env.done());
  CHECK(env.estimate().x >= 60.0);
  // Ten control ticks per scan at 20 Hz / 2 Hz.
  CHECK(env.odometry_log().size() == 1 + (env.samples().size() - 1) / 10);
  const auto report = report_run(env, Arm::Vanilla);
  REQUIRE(report.metrics.has_value());
  CHECK(report.goal_reached);
  CHECK(report.metrics->average_drift < 0.5);
  CHECK_THROWS_AS(env.step(mdp::Action::from_components(1, 0)), mdp::StepAfterDone);
}

TEST_CASE("a stopped car ahead is a collision and early collisions drop metrics") {
  mdp::EvalEnvironment env(corridor(100.0, {{1, Pose2D{6.0, 0.0, 0.0}, 0.0, 1.5}}), eval_config(2));
  const auto result = control::track_centerline(env, 3.0);
  CHECK(result.status == mdp::EvalStatus::Collision);
  const auto report = report_run(env, Arm::Vanilla);
  CHECK(report.collided);
  CHECK(report.distance < 10.0);
  CHECK_FALSE(report.metrics.has_value());
}

TEST_CASE("eval step drives to the waypoint") {
  mdp::EvalEnvironment env(corridor(60.0), eval_config(3));
  const auto r = env.step(mdp::Action::from_components(3, 0));
  CHECK_FALSE(r.done);
  CHECK(env.vehicle().pose.x == doctest::Approx(3.0).epsilon(0.1));
  CHECK(r.state.x_e == 0.0);
  CHECK(std::abs(r.state.y_e) < 0.3);
}

TEST_CASE("filtering changes nothing without traffic") {
  const auto scene = corridor(60.0);
  BenchmarkConfig config;
  config.seeds = 1;
  const auto& net = trained_policy();
  for (auto [plain, filtered] : {std::pair{Arm::Vanilla, Arm::VanillaFiltered}, std::pair{Arm::Ladfn, Arm::LadfnFiltered}}) {
    std::vector<mdp::EvalSample> a, b;
    auto ra = run_arm(scene, plain, 50.0, 77, net, config, &a);
    auto rb = run_arm(scene, filtered, 50.0, 77, net, config, &b);
    CHECK(ra.metrics == rb.metrics);
    CHECK(ra.outcome == rb.outcome);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].estimate == b[i].estimate);
  }
  CHECK(arms_for(scene).size() == 2);
  CHECK(arms_for(corridor(60.0, {{1, Pose2D{20, 3.5, 0}, 3.0, 1.5}})).size() == 4);
  CHECK(cruise_speed(corridor(60.0, {{1, Pose2D{20, 3.5, 0}, 3.0, 1.5}, {2, Pose2D{5, -3.5, 0}, 4.0, 1.5}}), 3.0) == 3.5);
}

TEST_CASE("plan_and_track is deterministic and handles a one-step unroll") {
  const auto scene = corridor(80.0);
  const auto& net = trained_policy();
  for (int n : {1, 5}) {
    control::PlanConfig plan;
    plan.unroll = n;
    mdp::EvalEnvironment a(scene, eval_config(9));
    mdp::EvalEnvironment b(scene, eval_config(9));
    const auto ra = control::plan_and_track(net, a, plan);
    const auto rb = control::plan_and_track(net, b, plan);
    CHECK(ra.status == rb.status);
    CHECK(ra.segments == rb.segments);
    CHECK(ra.segments > 0);
    REQUIRE(a.samples().size() == b.samples().size());
    CHECK(a.samples().back().truth == b.samples().back().truth);
    CHECK(a.samples().back().estimate == b.samples().back().estimate);
  }
}

TEST_CASE("a trained policy with a ten-step unroll stays on the road") {
  const auto& net = trained_policy();
  control::PlanConfig plan;
  plan.unroll = 10;
  for (std::uint64_t seed : {1, 2, 3}) {
    mdp::EvalEnvironment env(corridor(120.0), eval_config(seed));
    const auto r = control::plan_and_track(net, env, plan);
    CHECK(r.status == mdp::EvalStatus::Goal);
    for (const auto& s : env.samples()) {
      CHECK(s.truth.y >= -6.0);
      CHECK(s.truth.y <= 6.0);
    }
  }
}

TEST_CASE("benchmark runs pair seeds across arms and ignore the thread count") {
  std::vector<scene::Scenario> scenes{corridor(40.0)};
  BenchmarkConfig config;
  config.seeds = 2;
  config.lidar_ranges = {45.0};
  const auto& net = trained_policy();
  const auto one = run_benchmark(scenes, net, config);
  config.jobs = 3;
  const auto three = run_benchmark(scenes, net, config);
  CHECK(one.table == three.table);
  CHECK(one.runs == three.runs);
  REQUIRE(one.runs.size() == 4);
  for (const auto& r : one.runs) CHECK((r.seed == config.base_seed || r.seed == config.base_seed + 1));
  CHECK(one.table.cells.size() == 2);
  config.seeds = 0;
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
