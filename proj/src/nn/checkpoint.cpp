#include "grcgan/nn/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "grcgan/error.hpp"

namespace grcgan::nn {

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'R', 'C', 'G', 'A', 'N', 'C', 'K'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("truncated checkpoint");
  return value;
}

void write_doubles(std::ostream& out, const double* data, Index n) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, Index n) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw ConfigError("truncated checkpoint payload");
}

template <typename Fn>
void for_each_buffer(Network& net, Fn&& fn) {
  for (auto& block : net.blocks()) {
    fn(block.dense.weight.mutable_value().data(), block.dense.weight.value().size());
    fn(block.dense.bias.mutable_value().data(), block.dense.bias.value().size());
    if (block.batch_norm) {
      auto& bn = *block.batch_norm;
      fn(bn.gamma.mutable_value().data(), bn.gamma.value().size());
      fn(bn.beta.mutable_value().data(), bn.beta.value().size());
      fn(bn.running_mean.data(), bn.running_mean.size());
      fn(bn.running_var.data(), bn.running_var.size());
    }
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Network& network, const Rng& rng) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  nlohmann::json header{{"spec", network.spec()}, {"rng", serialize_rng(rng)}};
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  write_pod(out, kCheckpointVersion);
  write_pod(out, static_cast<std::uint64_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  Network copy = network;
  for_each_buffer(copy, [&](double* data, Index n) { write_doubles(out, data, n); });
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ConfigError("not a checkpoint file: " + path.string());
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto length = read_pod<std::uint64_t>(in);
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw ConfigError("truncated checkpoint header");
  const auto header = nlohmann::json::parse(text);
  Network net(header.at("spec").get<MlpSpec>());
  for_each_buffer(net, [&](double* data, Index n) { read_doubles(in, data, n); });
  return Checkpoint{std::move(net), deserialize_rng(header.at("rng").get<std::string>())};
}

}  // namespace grcgan::nn
