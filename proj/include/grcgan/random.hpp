#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Core>

namespace grcgan {

using Rng = std::mt19937_64;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Rng make_rng(std::uint64_t seed);

// Independent stream for task `index` under `seed`. Used wherever work could
// be fanned out so results never depend on scheduling.
Rng substream(std::uint64_t seed, std::uint64_t index);

RowMatrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);
RowMatrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi, Rng& rng);
double uniform01(Rng& rng);

std::string serialize_rng(const Rng& rng);
Rng deserialize_rng(const std::string& state);

}  // namespace grcgan
