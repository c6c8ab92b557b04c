#include "cli_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "driftnav/core/error.hpp"
#include "driftnav/version.hpp"

namespace driftnav::cli {

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError((where.empty() ? std::string(key) : where + "." + key) + ": wrong type");
  }
}

}  // namespace

TrainSettings train_settings_from_json(const json& doc, TrainSettings s) {
  check_keys(doc, "", {"ppo", "reward", "sampler", "checkpoint_every", "seed", "total_steps"});
  read(doc, "checkpoint_every", s.checkpoint_every, "");
  read(doc, "seed", s.ppo.seed, "");
  read(doc, "total_steps", s.ppo.total_steps, "");
  if (doc.contains("ppo")) {
    const json& p = doc["ppo"];
    check_keys(p, "ppo",
               {"gamma", "gae_lambda", "clip_epsilon", "batch_size", "rollout_horizon", "n_envs", "epochs",
                "learning_rate", "entropy_coef", "value_coef", "max_grad_norm"});
    read(p, "gamma", s.ppo.gamma, "ppo");
    read(p, "gae_lambda", s.ppo.gae_lambda, "ppo");
    read(p, "clip_epsilon", s.ppo.clip_epsilon, "ppo");
    read(p, "batch_size", s.ppo.batch_size, "ppo");
    read(p, "rollout_horizon", s.ppo.rollout_horizon, "ppo");
    read(p, "n_envs", s.ppo.n_envs, "ppo");
    read(p, "epochs", s.ppo.epochs, "ppo");
    read(p, "learning_rate", s.ppo.learning_rate, "ppo");
    read(p, "entropy_coef", s.ppo.entropy_coef, "ppo");
    read(p, "value_coef", s.ppo.value_coef, "ppo");
    read(p, "max_grad_norm", s.ppo.max_grad_norm, "ppo");
  }
  if (doc.contains("reward")) {
    const json& r = doc["reward"];
    check_keys(r, "reward",
               {"k1", "k2", "k3", "k4", "odd_power", "w_fwd", "terminal_penalty", "collision_radius",
                "proximity_radius"});
    read(r, "k1", s.reward.k1, "reward");
    read(r, "k2", s.reward.k2, "reward");
    read(r, "k3", s.reward.k3, "reward");
    read(r, "k4", s.reward.k4, "reward");
    read(r, "odd_power", s.reward.odd_power, "reward");
    read(r, "w_fwd", s.reward.w_fwd, "reward");
    read(r, "terminal_penalty", s.reward.terminal_penalty, "reward");
    read(r, "collision_radius", s.reward.collision_radius, "reward");
    read(r, "proximity_radius", s.reward.proximity_radius, "reward");
  }
  if (doc.contains("sampler")) {
    const json& b = doc["sampler"];
    check_keys(b, "sampler",
               {"edge_l", "edge_r", "n_slots", "traffic_presence", "traffic_dx_min", "traffic_dx_max",
                "traffic_speed_min", "traffic_speed_max", "fixed_y_c_norm"});
    read(b, "edge_l", s.sampler.edge_l, "sampler");
    read(b, "edge_r", s.sampler.edge_r, "sampler");
    read(b, "n_slots", s.sampler.n_slots, "sampler");
    read(b, "traffic_presence", s.sampler.traffic_presence, "sampler");
    read(b, "traffic_dx_min", s.sampler.traffic_dx_min, "sampler");
    read(b, "traffic_dx_max", s.sampler.traffic_dx_max, "sampler");
    read(b, "traffic_speed_min", s.sampler.traffic_speed_min, "sampler");
    read(b, "traffic_speed_max", s.sampler.traffic_speed_max, "sampler");
    if (b.contains("fixed_y_c_norm")) {
      if (b["fixed_y_c_norm"].is_null())
        s.sampler.fixed_y_c_norm.reset();
      else {
        double v = 0.0;
        read(b, "fixed_y_c_norm", v, "sampler");
        s.sampler.fixed_y_c_norm = v;
      }
    }
  }
  return s;
}

json to_json(const mdp::RewardConfig& r) {
  return {{"k1", r.k1},
          {"k2", r.k2},
          {"k3", r.k3},
          {"k4", r.k4},
          {"odd_power", r.odd_power},
          {"w_fwd", r.w_fwd},
          {"terminal_penalty", r.terminal_penalty},
          {"collision_radius", r.collision_radius},
          {"proximity_radius", r.proximity_radius}};
}

json to_json(const TrainSettings& s) {
  const auto& p = s.ppo;
  const auto& b = s.sampler;
  return {{"seed", p.seed},
          {"total_steps", p.total_steps},
          {"checkpoint_every", s.checkpoint_every},
          {"ppo",
           {{"gamma", p.gamma},
            {"gae_lambda", p.gae_lambda},
            {"clip_epsilon", p.clip_epsilon},
            {"batch_size", p.batch_size},
            {"rollout_horizon", p.rollout_horizon},
            {"n_envs", p.n_envs},
            {"epochs", p.epochs},
            {"learning_rate", p.learning_rate},
            {"entropy_coef", p.entropy_coef},
            {"value_coef", p.value_coef},
            {"max_grad_norm", p.max_grad_norm}}},
          {"reward", to_json(s.reward)},
          {"sampler",
           {{"edge_l", b.edge_l},
            {"edge_r", b.edge_r},
            {"n_slots", b.n_slots},
            {"traffic_presence", b.traffic_presence},
            {"traffic_dx_min", b.traffic_dx_min},
            {"traffic_dx_max", b.traffic_dx_max},
            {"traffic_speed_min", b.traffic_speed_min},
            {"traffic_speed_max", b.traffic_speed_max},
            {"fixed_y_c_norm", b.fixed_y_c_norm ? json(*b.fixed_y_c_norm) : json(nullptr)}}}};
}

json to_json(const eval::BenchmarkConfig& c) {
  const auto& e = c.eval;
  return {{"lidar_ranges", c.lidar_ranges},
          {"seeds", c.seeds},
          {"base_seed", c.base_seed},
          {"static_speed", c.static_speed},
          {"jobs", c.jobs},
          {"plan",
           {{"unroll", c.plan.unroll},
            {"edge_margin", c.plan.edge_margin},
            {"max_lateral_slope", c.plan.max_lateral_slope}}},
          {"eval",
           {{"n_rays", e.lidar.n_rays},
            {"noise_sigma", e.lidar.noise_sigma},
            {"perception_rate", e.perception_rate},
            {"control_rate", e.track.control_rate},
            {"stanley_gain", e.track.gain},
            {"divergence_limit", e.track.divergence_limit},
            {"min_mean_speed", e.min_mean_speed},
            {"time_margin", e.time_margin},
            {"reward", to_json(e.reward)}}}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  json artifacts = json::array();
  for (const auto& a : m.artifacts) artifacts.push_back(a.string());
  const json doc{{"command", m.command},
                 {"config", m.config},
                 {"seed", m.seed},
                 {"artifacts", artifacts},
                 {"tool_version", kVersion}};
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
  return path;
}

std::filesystem::path resolve_output(const std::filesystem::path& p) {
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("DRIFTNAV_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / p;
  return p;
}

}  // namespace driftnav::cli
