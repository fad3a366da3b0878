#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "villi/nn/layers.hpp"

namespace villi::nn {

/// Versioned parameter container: a JSON header (architecture description,
/// seed, epoch, hashes) plus named float arrays stored as raw little-endian
/// bytes, so a save/load round trip is bit-identical.
struct Checkpoint {
  nlohmann::json header;
  std::vector<std::pair<std::string, std::vector<float>>> arrays;
};

inline constexpr char kCheckpointMagic[8] = {'V', 'L', 'C', 'P',
                                             '0', '0', '0', '1'};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Copies a parameter set into the checkpoint as arrays p0, p1, ...
void pack_params(Checkpoint& ckpt, const std::vector<ParamView>& params);

/// Restores arrays p0, p1, ... into the parameter set; array count and
/// sizes must match the architecture exactly.
void unpack_params(const Checkpoint& ckpt, const std::vector<ParamView>& params);

}  // namespace villi::nn
