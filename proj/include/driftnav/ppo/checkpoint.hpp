#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "driftnav/ppo/policy.hpp"
#include "driftnav/ppo/update.hpp"

namespace driftnav::ppo {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to resume training or run the policy. Optimizer
/// moments are included so resumed runs continue the same trajectory.
struct PolicyCheckpoint {
  ActorCritic net;
  TrainConfig config;
  std::int64_t steps{0};
  int updates{0};
  int n_slots{2};
  Adam optimizer;
  std::string rng_state;  // textual mt19937_64 state, empty before the first update
};

/// Layout: one text line "DRIFTNAV-CHECKPOINT <version>", one line of JSON
/// metadata (specs, shapes, config, counters), then the payload as
/// little-endian float64 in the order listed in the metadata.
void save_checkpoint(const PolicyCheckpoint& ckpt, const std::filesystem::path& path);
void write_checkpoint(const PolicyCheckpoint& ckpt, std::ostream& out);
/// Throws IoError or ParseError.
PolicyCheckpoint load_checkpoint(const std::filesystem::path& path);
PolicyCheckpoint read_checkpoint(std::istream& in);

}  // namespace driftnav::ppo
