// driftnav command-line entry point.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli_config.hpp"
#include "driftnav/core/error.hpp"
#include "driftnav/eval/report.hpp"
#include "driftnav/eval/trajectory.hpp"
#include "driftnav/mdp/transition_log.hpp"
#include "driftnav/ppo/checkpoint.hpp"
#include "driftnav/ppo/trainer.hpp"
#include "driftnav/scene/scenario.hpp"
#include "driftnav/version.hpp"

namespace fs = std::filesystem;
using namespace driftnav;
using cli::json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kIo = 3 };

struct Options {
  std::string scenario_path;

  std::string train_config;
  std::string out_dir = "runs/train";
  std::string resume;
  std::int64_t steps = -1;
  std::int64_t seed = -1;
  int checkpoint_every = -1;
  bool one_sided = false;

  std::string checkpoint;
  std::string scenarios_dir = "scenarios";
  std::string bench_out = "runs/bench";
  std::vector<double> ranges{45.0, 50.0, 55.0};
  int seeds = 20;
  std::uint64_t base_seed = 1000;
  int jobs = 1;
  int unroll = 5;

  std::string eval_scenario;
  std::string arm = "ladfn";
  double range = 50.0;
  std::uint64_t eval_seed = 0;
  std::string eval_out = "runs/eval";

  std::string log_path;
  int every = 20;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

ppo::PolicyCheckpoint load_policy(const std::string& path) {
  if (path.empty()) throw ValidationError("checkpoint", "required");
  if (!fs::exists(path)) throw IoError("checkpoint not found: " + path);
  return ppo::load_checkpoint(path);
}

int cmd_scenario_validate(const Options& o) {
  if (!fs::exists(o.scenario_path)) throw IoError("scenario not found: " + o.scenario_path);
  const auto s = scene::load_scenario(o.scenario_path);
  std::printf("%s: valid (%s, length %.1f m, %zu feature regions, %zu vehicles)\n", o.scenario_path.c_str(),
              s.name.c_str(), s.road.length, s.features.size(), s.traffic.size());
  return kOk;
}

int cmd_train(const Options& o) {
  cli::TrainSettings settings;
  if (!o.train_config.empty()) settings = cli::train_settings_from_json(cli::read_json_file(o.train_config));
  if (o.steps >= 0) settings.ppo.total_steps = o.steps;
  if (o.seed >= 0) settings.ppo.seed = static_cast<std::uint64_t>(o.seed);
  if (o.checkpoint_every >= 0) settings.checkpoint_every = o.checkpoint_every;
  if (o.one_sided) settings.sampler.fixed_y_c_norm = 1.0;
  settings.ppo.validate();
  settings.reward.validate();
  settings.sampler.validate();

  std::optional<ppo::PolicyCheckpoint> resume;
  if (!o.resume.empty()) resume = load_policy(o.resume);

  const fs::path dir = cli::resolve_output(o.out_dir);
  ensure_dir(dir);
  const fs::path metrics_path = dir / "metrics.csv";
  const fs::path ckpt_path = dir / "policy.ckpt";
  const fs::path periodic_path = dir / "checkpoint_latest.ckpt";
  const fs::path transitions_path = dir / "transitions.csv";
  auto metrics = open_out(metrics_path);
  ppo::write_metrics_header(metrics);

  std::int64_t last_step = resume ? resume->steps : 0;
  ppo::TrainHooks hooks;
  hooks.checkpoint_every = settings.checkpoint_every;
  hooks.on_update = [&](const ppo::UpdateMetrics& m) {
    last_step = m.step;
    ppo::write_metrics_row(metrics, m);
    if (m.update % 10 == 0)
      std::printf("update %d step %lld mean episode reward %.3f entropy %.3f\n", m.update,
                  static_cast<long long>(m.step), m.mean_episode_reward, m.stats.entropy);
  };
  hooks.on_checkpoint = [&](const ppo::PolicyCheckpoint& c) { ppo::save_checkpoint(c, periodic_path); };

  ppo::PolicyCheckpoint result;
  try {
    result = ppo::train(settings.sampler, settings.reward, settings.ppo, hooks, resume);
  } catch (const ppo::NonFiniteLoss& e) {
    std::fprintf(stderr, "error: %s after step %lld\n", e.what(), static_cast<long long>(last_step));
    return kRuntime;
  }
  ppo::save_checkpoint(result, ckpt_path);

  // Greedy audit episodes from held-out initial states.
  std::mt19937_64 rng(settings.ppo.seed ^ 0xA5A5A5A5ULL);
  std::vector<mdp::Transition> log;
  for (int e = 0; e < 10; ++e) {
    mdp::TrainingEnvironment env(settings.reward);
    mdp::StateVector s = env.reset(mdp::sample_initial_state(rng, settings.sampler, settings.reward.collision_radius));
    while (!env.done()) {
      const int a = ppo::greedy_action(result.net, s);
      auto step = env.step(mdp::Action::from_index(a));
      log.push_back({s, a, step.reward, step.done});
      s = step.state;
    }
  }
  auto transitions = open_out(transitions_path);
  mdp::write_transition_log(transitions, settings.reward, log, settings.sampler.n_slots);

  json config = cli::to_json(settings);
  if (resume) config["resume"] = o.resume;
  cli::write_manifest({"train", config, settings.ppo.seed, {ckpt_path, metrics_path, transitions_path}}, dir);
  std::printf("trained %lld steps (%d updates); checkpoint %s\n", static_cast<long long>(result.steps),
              result.updates, ckpt_path.string().c_str());
  return kOk;
}

eval::BenchmarkConfig bench_config(const Options& o) {
  eval::BenchmarkConfig c;
  c.lidar_ranges = o.ranges;
  c.seeds = o.seeds;
  c.base_seed = o.base_seed;
  c.jobs = o.jobs;
  c.plan.unroll = o.unroll;
  c.validate();
  return c;
}

std::vector<scene::Scenario> load_scenarios(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("scenario directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError("scenarios", "no .json scenarios in " + dir.string());
  std::vector<scene::Scenario> out;
  for (const auto& f : files) out.push_back(scene::load_scenario(f));
  return out;
}

int cmd_bench(const Options& o) {
  const auto policy = load_policy(o.checkpoint);
  const auto config = bench_config(o);
  const auto scenarios = load_scenarios(o.scenarios_dir);
  const fs::path dir = cli::resolve_output(o.bench_out);
  ensure_dir(dir);

  const auto result = eval::run_benchmark(scenarios, policy.net, config,
                                          [](const eval::TrajectoryReport& r, std::size_t done, std::size_t total) {
                                            if (r.outcome.rfind("error", 0) == 0 || !r.goal_reached)
                                              std::fprintf(stderr, "[%zu/%zu] %s %s range %.0f seed %llu: %s\n",
                                                           done, total, r.scenario.c_str(),
                                                           std::string(eval::to_string(r.arm)).c_str(),
                                                           r.lidar_range,
                                                           static_cast<unsigned long long>(r.seed),
                                                           r.outcome.c_str());
                                          });
  json config_json = cli::to_json(config);
  config_json["checkpoint"] = o.checkpoint;
  json names = json::array();
  for (const auto& s : scenarios) names.push_back(s.name);
  config_json["scenarios"] = names;
  const auto paths = eval::emit_report(result, dir, config_json.dump());
  cli::write_manifest({"bench", config_json, config.base_seed, {paths.table_csv, paths.runs_csv, paths.summary}},
                      dir);

  std::printf("%-26s %-10s %10s %10s %8s\n", "scenario", "arm", "avg drift", "vs vanilla", "failures");
  for (const auto& name : result.table.scenarios()) {
    for (eval::Arm arm : eval::kAllArms) {
      const auto mean = eval::scenario_mean(result.table, name, arm);
      if (!mean) continue;
      int failures = 0;
      for (const auto& c : result.table.cells)
        if (c.scenario == name && c.arm == arm) failures += c.seeds - c.goals;
      const auto factor = eval::is_ladfn(arm) ? eval::scenario_improvement(result.table, name, arm) : std::nullopt;
      std::printf("%-26s %-10s %10.4f %10s %8d\n", name.c_str(), std::string(eval::to_string(arm)).c_str(), *mean,
                  factor ? (std::to_string(*factor).substr(0, 5) + "x").c_str() : "-", failures);
    }
  }
  std::printf("report: %s\n", dir.string().c_str());
  return kOk;
}

int cmd_eval(const Options& o) {
  const auto policy = load_policy(o.checkpoint);
  if (!fs::exists(o.eval_scenario)) throw IoError("scenario not found: " + o.eval_scenario);
  const auto scenario = scene::load_scenario(o.eval_scenario);
  eval::Arm arm;
  try {
    arm = eval::parse_arm(o.arm);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("arm", e.what());
  }
  Options single = o;
  single.ranges = {o.range};
  const auto config = bench_config(single);
  const fs::path dir = cli::resolve_output(o.eval_out);
  ensure_dir(dir);
  std::vector<mdp::EvalSample> samples;
  const auto report = eval::run_arm(scenario, arm, o.range, o.eval_seed, policy.net, config, &samples);
  const fs::path traj_path = dir / "trajectory.csv";
  const fs::path report_path = dir / "report.json";
  {
    auto out = open_out(traj_path);
    eval::write_trajectory_csv(out, samples);
  }
  json r{{"scenario", report.scenario}, {"arm", eval::to_string(report.arm)}, {"lidar_range", report.lidar_range},
         {"seed", report.seed},         {"outcome", report.outcome},          {"collided", report.collided},
         {"lane_breach", report.lane_breach}, {"goal_reached", report.goal_reached}, {"duration", report.duration},
         {"distance", report.distance}};
  if (report.metrics) {
    r["average_drift"] = report.metrics->average_drift;
    r["final_drift"] = report.metrics->final_drift;
    r["rotational_offset"] = report.metrics->rotational_offset;
  }
  open_out(report_path) << r.dump(2) << '\n';
  json config_json = cli::to_json(config);
  config_json["checkpoint"] = o.checkpoint;
  config_json["scenario"] = o.eval_scenario;
  config_json["arm"] = o.arm;
  cli::write_manifest({"eval", config_json, o.eval_seed, {traj_path, report_path}}, dir);
  std::printf("%s %s: %s", report.scenario.c_str(), o.arm.c_str(), report.outcome.c_str());
  if (report.metrics)
    std::printf(", average drift %.4f m, final drift %.4f m, rotational offset %.5f rad", report.metrics->average_drift,
                report.metrics->final_drift, report.metrics->rotational_offset);
  std::printf("\n");
  return kOk;
}

int cmd_replay(const Options& o) {
  std::ifstream in(o.log_path);
  if (!in) throw IoError("cannot open " + o.log_path);
  const auto samples = eval::read_trajectory_csv(in);
  if (samples.empty()) {
    std::printf("%s: empty trajectory log, nothing to replay\n", o.log_path.c_str());
    return kOk;
  }
  std::vector<Pose2D> est, gt;
  const int every = std::max(o.every, 1);
  std::printf("%10s %10s %10s %10s %8s\n", "t", "x_gt", "y_gt", "drift", "steer");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    est.push_back(s.estimate);
    gt.push_back(s.truth);
    const double drift = (s.estimate.position() - s.truth.position()).norm();
    const bool clamped = std::abs(s.steer) >= 0.6 - 1e-12;
    if (i % static_cast<std::size_t>(every) == 0 || i + 1 == samples.size() || clamped)
      std::printf("%10.2f %10.3f %10.3f %10.4f %8.4f%s\n", s.t, s.truth.x, s.truth.y, drift, s.steer,
                  clamped ? "  steer at limit" : "");
  }
  const auto m = eval::compute_drift(est, gt);
  std::printf("steps %zu, duration %.2f s\naverage drift %.6f m\nfinal drift %.6f m\nrotational offset %.6f rad\n",
              samples.size(), samples.back().t, m.average_drift, m.final_drift, m.rotational_offset);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perception-aware planning benchmark: scenario checks, PPO training, evaluation, replay"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto* scenario = app.add_subcommand("scenario", "Scenario utilities");
  scenario->require_subcommand(1);
  auto* validate = scenario->add_subcommand("validate", "Load and validate a scenario file");
  validate->add_option("path", o.scenario_path, "Scenario JSON")->required();

  auto* train = app.add_subcommand("train", "Train the PPO policy on the teleport environment");
  train->add_option("--config", o.train_config, "Training config JSON (flags override it)");
  train->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  train->add_option("--resume", o.resume, "Checkpoint to continue from");
  train->add_option("--steps", o.steps, "Total environment steps");
  train->add_option("--seed", o.seed, "Training seed");
  train->add_option("--checkpoint-every", o.checkpoint_every, "Updates between periodic checkpoints (0 = off)");
  train->add_flag("--one-sided", o.one_sided, "Curriculum with every feature centroid on the right (y_c_norm = 1)");

  auto add_eval_flags = [&](CLI::App* cmd) {
    cmd->add_option("--checkpoint", o.checkpoint, "Policy checkpoint")->required();
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
    cmd->add_option("--unroll", o.unroll, "Policy unroll depth per replan")->capture_default_str();
  };
  auto* bench = app.add_subcommand("bench", "Run the four-arm drift benchmark");
  add_eval_flags(bench);
  bench->add_option("--scenarios", o.scenarios_dir, "Directory of scenario JSON files")->capture_default_str();
  bench->add_option("--out", o.bench_out, "Output directory")->capture_default_str();
  bench->add_option("--ranges", o.ranges, "LIDAR ranges in meters")->delimiter(',')->capture_default_str();
  bench->add_option("--seeds", o.seeds, "Seeds per cell")->capture_default_str();
  bench->add_option("--base-seed", o.base_seed, "First run seed")->capture_default_str();

  auto* ev = app.add_subcommand("eval", "Run one arm on one scenario and log the executed trajectory");
  add_eval_flags(ev);
  ev->add_option("--scenario", o.eval_scenario, "Scenario JSON")->required();
  ev->add_option("--arm", o.arm, "ladfn, ladfn+f, vanilla or vanilla+f")->capture_default_str();
  ev->add_option("--range", o.range, "LIDAR range in meters")->capture_default_str();
  ev->add_option("--seed", o.eval_seed, "Run seed")->capture_default_str();
  ev->add_option("--out", o.eval_out, "Output directory")->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Summarize an executed-trajectory log");
  replay->add_option("log", o.log_path, "trajectory.csv")->required();
  replay->add_option("--every", o.every, "Print every n-th step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) return cmd_scenario_validate(o);
    if (*train) return cmd_train(o);
    if (*bench) return cmd_bench(o);
    if (*ev) return cmd_eval(o);
    if (*replay) return cmd_replay(o);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kValidation;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kRuntime;
}
