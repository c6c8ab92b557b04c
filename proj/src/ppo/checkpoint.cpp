#include "driftnav/ppo/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftnav/core/error.hpp"

namespace driftnav::ppo {

using nlohmann::json;

namespace {

constexpr const char* kMagic = "DRIFTNAV-CHECKPOINT";

json spec_json(const MlpSpec& s) {
  return {{"input_dim", s.input_dim}, {"hidden", s.hidden}, {"output_dim", s.output_dim}};
}

MlpSpec spec_from(const json& j) {
  MlpSpec s;
  s.input_dim = j.at("input_dim").get<int>();
  s.hidden = j.at("hidden").get<std::vector<int>>();
  s.output_dim = j.at("output_dim").get<int>();
  s.validate();
  return s;
}

json config_json(const TrainConfig& c) {
  return {{"gamma", c.gamma},
          {"gae_lambda", c.gae_lambda},
          {"clip_epsilon", c.clip_epsilon},
          {"batch_size", c.batch_size},
          {"rollout_horizon", c.rollout_horizon},
          {"n_envs", c.n_envs},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"entropy_coef", c.entropy_coef},
          {"value_coef", c.value_coef},
          {"max_grad_norm", c.max_grad_norm},
          {"total_steps", c.total_steps},
          {"seed", c.seed}};
}

TrainConfig config_from(const json& j) {
  TrainConfig c;
  c.gamma = j.at("gamma").get<double>();
  c.gae_lambda = j.at("gae_lambda").get<double>();
  c.clip_epsilon = j.at("clip_epsilon").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.rollout_horizon = j.at("rollout_horizon").get<int>();
  c.n_envs = j.at("n_envs").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.entropy_coef = j.at("entropy_coef").get<double>();
  c.value_coef = j.at("value_coef").get<double>();
  c.max_grad_norm = j.at("max_grad_norm").get<double>();
  c.total_steps = j.at("total_steps").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

void write_doubles(std::ostream& out, const Eigen::VectorXd& v) {
  static_assert(std::endian::native == std::endian::little, "checkpoint payload assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Eigen::VectorXd read_doubles(std::istream& in, std::size_t n, const char* what) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double))
    throw ParseError(std::string("checkpoint payload truncated in ") + what);
  return v;
}

}  // namespace

void write_checkpoint(const PolicyCheckpoint& c, std::ostream& out) {
  c.net.check_shapes();
  json meta;
  meta["actor"] = spec_json(c.net.actor_spec);
  meta["critic"] = spec_json(c.net.critic_spec);
  json layers = json::array();
  for (const auto* params : {&c.net.actor, &c.net.critic}) {
    const char* name = params == &c.net.actor ? "actor" : "critic";
    for (std::size_t l = 0; l < params->weights.size(); ++l) {
      layers.push_back({{"net", name}, {"layer", l}, {"weight", {params->weights[l].rows(), params->weights[l].cols()}},
                        {"bias", params->biases[l].size()}});
    }
  }
  meta["layers"] = layers;
  meta["observation_scale"] = c.net.observation_scale.size();
  meta["config"] = config_json(c.config);
  meta["steps"] = c.steps;
  meta["updates"] = c.updates;
  meta["n_slots"] = c.n_slots;
  meta["optimizer"] = {{"t", c.optimizer.t},
                       {"lr", c.optimizer.lr},
                       {"beta1", c.optimizer.beta1},
                       {"beta2", c.optimizer.beta2},
                       {"eps", c.optimizer.eps},
                       {"moments", c.optimizer.m.size()}};
  meta["rng_state"] = c.rng_state;
  meta["payload"] = "actor params, critic params, observation_scale, adam m, adam v (float64 LE, column-major weights)";

  out << kMagic << ' ' << kCheckpointVersion << '\n' << meta.dump() << '\n';
  write_doubles(out, c.net.actor.flatten());
  write_doubles(out, c.net.critic.flatten());
  write_doubles(out, c.net.observation_scale);
  write_doubles(out, c.optimizer.m);
  write_doubles(out, c.optimizer.v);
  if (!out) throw IoError("failed writing checkpoint");
}

void save_checkpoint(const PolicyCheckpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(ckpt, out);
}

PolicyCheckpoint read_checkpoint(std::istream& in) {
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  hs >> magic >> version;
  if (magic != kMagic) throw ParseError("not a checkpoint file");
  if (version != kCheckpointVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  std::string meta_line;
  std::getline(in, meta_line);

  PolicyCheckpoint c;
  try {
    const json meta = json::parse(meta_line);
    c.net.actor_spec = spec_from(meta.at("actor"));
    c.net.critic_spec = spec_from(meta.at("critic"));
    c.net.actor = MlpParams::zeros(c.net.actor_spec);
    c.net.critic = MlpParams::zeros(c.net.critic_spec);
    c.config = config_from(meta.at("config"));
    c.steps = meta.at("steps").get<std::int64_t>();
    c.updates = meta.at("updates").get<int>();
    c.n_slots = meta.at("n_slots").get<int>();
    const json& opt = meta.at("optimizer");
    c.optimizer.t = opt.at("t").get<std::int64_t>();
    c.optimizer.lr = opt.at("lr").get<double>();
    c.optimizer.beta1 = opt.at("beta1").get<double>();
    c.optimizer.beta2 = opt.at("beta2").get<double>();
    c.optimizer.eps = opt.at("eps").get<double>();
    const auto moments = opt.at("moments").get<std::size_t>();
    c.rng_state = meta.at("rng_state").get<std::string>();
    const auto scale = meta.at("observation_scale").get<std::size_t>();

    c.net.actor.assign(read_doubles(in, c.net.actor.size(), "actor"));
    c.net.critic.assign(read_doubles(in, c.net.critic.size(), "critic"));
    c.net.observation_scale = read_doubles(in, scale, "observation_scale");
    c.optimizer.m = read_doubles(in, moments, "adam m");
    c.optimizer.v = read_doubles(in, moments, "adam v");
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad checkpoint metadata: ") + e.what());
  }
  try {
    c.net.check_shapes();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return c;
}

PolicyCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  return read_checkpoint(in);
}

}  // namespace driftnav::ppo
