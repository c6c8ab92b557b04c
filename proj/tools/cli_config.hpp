#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftnav/eval/benchmark.hpp"
#include "driftnav/mdp/train_env.hpp"
#include "driftnav/ppo/update.hpp"

namespace driftnav::cli {

using nlohmann::json;

struct TrainSettings {
  ppo::TrainConfig ppo;
  mdp::RewardConfig reward;
  mdp::SamplerBounds sampler;
  int checkpoint_every{10};  // updates
};

/// Applies the keys present in `doc` over `base`. Unknown keys raise a
/// ValidationError naming them; wrong types raise ParseError.
TrainSettings train_settings_from_json(const json& doc, TrainSettings base = {});
json to_json(const TrainSettings& s);

json to_json(const mdp::RewardConfig& r);
json to_json(const eval::BenchmarkConfig& b);

/// Reads and parses a JSON file. Throws IoError / ParseError.
json read_json_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  json config;
  std::uint64_t seed{0};
  std::vector<std::filesystem::path> artifacts;
};

/// Writes manifest.json into dir and returns its path.
std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

/// Relative output paths are resolved against $DRIFTNAV_OUTPUT_ROOT when set.
std::filesystem::path resolve_output(const std::filesystem::path& p);

}  // namespace driftnav::cli
