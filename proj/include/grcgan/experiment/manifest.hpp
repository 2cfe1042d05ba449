#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "grcgan/data/circular.hpp"
#include "grcgan/data/mvn.hpp"
#include "grcgan/gan/config.hpp"
#include "grcgan/nn/network.hpp"

namespace grcgan::experiment {

inline constexpr int kManifestVersion = 1;

enum class ExperimentId { circular_full, circular_partial, mvn, mvn_sweep };

const char* to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string& name);

/// Where the training data comes from. Circular data is redrawn for every
/// repetition seed. The MVN parameters are fixed by `param_seed`, and only
/// the N observations are redrawn per repetition.
struct DatasetSpec {
  enum class Kind { circular, mvn };
  Kind kind = Kind::circular;
  data::CircularSpec circular;
  std::size_t k = 10;
  std::size_t p = 8;
  std::uint64_t param_seed = 0;
  std::size_t n = 1000;

  bool is_circular() const { return kind == Kind::circular; }
};

void to_json(nlohmann::json& j, const DatasetSpec& spec);
void from_json(const nlohmann::json& j, DatasetSpec& spec);

struct EvalSpec {
  std::size_t n_labels = 360;     // circular-full and MVN; ignored for gapped data
  std::size_t n_per_label = 100;
};

/// Everything needed to regenerate one model variant's runs bit for bit.
struct RunManifest {
  int version = kManifestVersion;
  ExperimentId experiment = ExperimentId::circular_full;
  std::string variant;
  DatasetSpec dataset;
  gan::GanConfig config;  // config.seed is overridden by each repetition seed
  gan::ConditionEncoding encoding = gan::ConditionEncoding::sin_cos;
  nn::MlpSpec generator;
  nn::MlpSpec discriminator;
  EvalSpec eval;
  std::vector<std::uint64_t> seeds;  // one per repetition
  std::string output_dir;

  std::size_t repetitions() const { return seeds.size(); }
  /// Throws ConfigError on inconsistent dimensions or an invalid config.
  void validate() const;
};

void to_json(nlohmann::json& j, const RunManifest& m);
/// Strict: wrong version, unknown or missing keys raise ConfigError.
void from_json(const nlohmann::json& j, RunManifest& m);

RunManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const RunManifest& m);

/// Stable 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string manifest_hash(const nlohmann::json& j);

/// Seeds base, base + 1, ...
std::vector<std::uint64_t> repetition_seeds(std::uint64_t base, std::size_t reps);

/// Variant names understood by default_manifest:
/// circular experiments: gr-exact, gr-ratio, degenerate, no-interp;
/// MVN experiments: gr, cgan.
std::vector<std::string> variants_for(ExperimentId id);

/// Preset manifest for one variant. For mvn-sweep, `p` picks the condition
/// dimension and k = p + 2; it is ignored elsewhere.
RunManifest default_manifest(ExperimentId id, const std::string& variant, std::size_t p = 8);

/// Multiplies the iteration budget by `scale`, rounding to nearest, at least 1.
void scale_iterations(RunManifest& m, double scale);

}  // namespace grcgan::experiment
