#pragma once

#include <filesystem>

#include "grcgan/nn/network.hpp"
#include "grcgan/random.hpp"

namespace grcgan::nn {

struct Checkpoint {
  Network network;
  Rng rng;
};

// Layout: 8-byte magic "GRCGANCK", uint32 format version, uint64 header
// length, JSON header (MlpSpec, RNG state), then every parameter and
// batch-norm running statistic as raw native doubles in block order. The
// round trip is bit exact on the same platform.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const Network& network, const Rng& rng);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace grcgan::nn
