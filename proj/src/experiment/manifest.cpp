#include "grcgan/experiment/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "grcgan/error.hpp"

namespace grcgan::experiment {

namespace {

void require_keys(const nlohmann::json& j, const std::set<std::string>& keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!keys.contains(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
  for (const auto& key : keys) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "' in " + where);
  }
}

}  // namespace

const char* to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::circular_full: return "circular-full";
    case ExperimentId::circular_partial: return "circular-partial";
    case ExperimentId::mvn: return "mvn";
    case ExperimentId::mvn_sweep: return "mvn-sweep";
  }
  return "?";
}

ExperimentId experiment_from_string(const std::string& name) {
  for (auto id : {ExperimentId::circular_full, ExperimentId::circular_partial, ExperimentId::mvn,
                  ExperimentId::mvn_sweep}) {
    if (name == to_string(id)) return id;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

void to_json(nlohmann::json& j, const DatasetSpec& spec) {
  if (spec.is_circular()) {
    j = {{"kind", "circular"}, {"spec", spec.circular}};
  } else {
    j = {{"kind", "mvn"}, {"k", spec.k}, {"p", spec.p}, {"param_seed", spec.param_seed}, {"n", spec.n}};
  }
}

void from_json(const nlohmann::json& j, DatasetSpec& spec) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "circular") {
    require_keys(j, {"kind", "spec"}, "circular dataset");
    spec.kind = DatasetSpec::Kind::circular;
    spec.circular = j.at("spec").get<data::CircularSpec>();
  } else if (kind == "mvn") {
    require_keys(j, {"kind", "k", "p", "param_seed", "n"}, "mvn dataset");
    spec.kind = DatasetSpec::Kind::mvn;
    spec.k = j.at("k").get<std::size_t>();
    spec.p = j.at("p").get<std::size_t>();
    spec.param_seed = j.at("param_seed").get<std::uint64_t>();
    spec.n = j.at("n").get<std::size_t>();
  } else {
    throw ConfigError("unknown dataset kind '" + kind + "'");
  }
}

void RunManifest::validate() const {
  if (version != kManifestVersion) throw ConfigError("unsupported manifest version");
  if (seeds.empty()) throw ConfigError("manifest needs at least one repetition seed");
  config.validate();
  generator.validate();
  discriminator.validate();
  std::size_t p = 1;
  std::size_t q = 2;
  if (dataset.is_circular()) {
    dataset.circular.validate();
    if (experiment != ExperimentId::circular_full && experiment != ExperimentId::circular_partial) {
      throw ConfigError("circular data needs a circular experiment id");
    }
  } else {
    if (dataset.p == 0 || dataset.p >= dataset.k) throw ConfigError("need 1 <= p < k");
    if (dataset.n < 2) throw ConfigError("MVN dataset needs at least 2 rows");
    if (experiment != ExperimentId::mvn && experiment != ExperimentId::mvn_sweep) {
      throw ConfigError("MVN data needs an MVN experiment id");
    }
    p = dataset.p;
    q = dataset.k - dataset.p;
  }
  const std::size_t enc = encoding == gan::ConditionEncoding::sin_cos ? 2 * p : p;
  if (generator.input_dim != config.noise_dim + enc || generator.output_dim != q) {
    throw ConfigError("generator dimensions do not match the data and noise");
  }
  if (discriminator.input_dim != q + enc || discriminator.output_dim != 1) {
    throw ConfigError("discriminator dimensions do not match the data");
  }
  if (config.loss.kind == gan::LossKind::vanilla_bce &&
      discriminator.output_activation.kind != nn::Activation::Kind::sigmoid) {
    throw ConfigError("the BCE loss needs a sigmoid discriminator output");
  }
  if (eval.n_per_label < q + 1) throw ConfigError("evaluation needs at least q + 1 samples per label");
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"version", m.version},
       {"experiment", to_string(m.experiment)},
       {"variant", m.variant},
       {"dataset", m.dataset},
       {"config", m.config},
       {"encoding", gan::to_string(m.encoding)},
       {"generator", m.generator},
       {"discriminator", m.discriminator},
       {"eval", {{"n_labels", m.eval.n_labels}, {"n_per_label", m.eval.n_per_label}}},
       {"seeds", m.seeds},
       {"output_dir", m.output_dir}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  require_keys(j,
               {"version", "experiment", "variant", "dataset", "config", "encoding", "generator", "discriminator",
                "eval", "seeds", "output_dir"},
               "manifest");
  m.version = j.at("version").get<int>();
  if (m.version != kManifestVersion) throw ConfigError("unsupported manifest version " + std::to_string(m.version));
  m.experiment = experiment_from_string(j.at("experiment").get<std::string>());
  m.variant = j.at("variant").get<std::string>();
  m.dataset = j.at("dataset").get<DatasetSpec>();
  m.config = j.at("config").get<gan::GanConfig>();
  m.encoding = gan::encoding_from_string(j.at("encoding").get<std::string>());
  m.generator = j.at("generator").get<nn::MlpSpec>();
  m.discriminator = j.at("discriminator").get<nn::MlpSpec>();
  const auto& e = j.at("eval");
  require_keys(e, {"n_labels", "n_per_label"}, "eval");
  m.eval.n_labels = e.at("n_labels").get<std::size_t>();
  m.eval.n_per_label = e.at("n_per_label").get<std::size_t>();
  m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  m.output_dir = j.at("output_dir").get<std::string>();
  m.validate();
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path + " is not valid JSON: " + e.what());
  }
  return j.get<RunManifest>();
}

void save_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << nlohmann::json(m).dump(2) << '\n';
}

std::string manifest_hash(const nlohmann::json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::uint64_t> repetition_seeds(std::uint64_t base, std::size_t reps) {
  std::vector<std::uint64_t> seeds(reps);
  for (std::size_t i = 0; i < reps; ++i) seeds[i] = base + i;
  return seeds;
}

std::vector<std::string> variants_for(ExperimentId id) {
  if (id == ExperimentId::circular_full || id == ExperimentId::circular_partial) {
    return {"gr-exact", "gr-ratio", "degenerate", "no-interp"};
  }
  return {"cgan", "gr"};
}

RunManifest default_manifest(ExperimentId id, const std::string& variant, std::size_t p) {
  RunManifest m;
  m.experiment = id;
  m.variant = variant;
  m.seeds = repetition_seeds(1, 3);
  m.output_dir = std::string("runs/") + to_string(id) + "/" + variant;
  if (id == ExperimentId::circular_full || id == ExperimentId::circular_partial) {
    m.dataset.kind = DatasetSpec::Kind::circular;
    m.dataset.circular = id == ExperimentId::circular_full ? data::CircularSpec::full() : data::CircularSpec::partial();
    m.config = gan::GanConfig::circular_preset();
    m.encoding = gan::ConditionEncoding::sin_cos;
    m.generator = nn::MlpSpec::circular_generator();
    m.discriminator = nn::MlpSpec::circular_discriminator();
    m.eval = {360, 100};
    if (variant == "gr-exact") {
    } else if (variant == "gr-ratio") {
      m.config.reg_form = gan::RegForm::ratio;
      m.config.perturbation = {gan::PerturbationLaw::Kind::sphere_surface, 0.1};
    } else if (variant == "degenerate") {
      m.config.lambda = 0.0;
    } else if (variant == "no-interp") {
      m.config.interpolate = false;
    } else {
      throw ConfigError("unknown circular variant '" + variant + "'");
    }
  } else {
    if (id == ExperimentId::mvn) p = 8;
    if (p == 0) throw ConfigError("condition dimension must be >= 1");
    const std::size_t k = p + 2;
    m.dataset.kind = DatasetSpec::Kind::mvn;
    m.dataset.k = k;
    m.dataset.p = p;
    m.dataset.param_seed = 1000 + p;
    m.dataset.n = 1000;
    m.config = gan::GanConfig::mvn_preset(k - p);
    m.encoding = gan::ConditionEncoding::raw;
    m.generator = nn::MlpSpec::mvn_generator(p, k - p);
    m.discriminator = nn::MlpSpec::mvn_discriminator(k);
    m.eval = {100, 250};
    if (id == ExperimentId::mvn_sweep) m.output_dir += "/p" + std::to_string(p);
    if (variant == "gr") {
    } else if (variant == "cgan") {
      m.config.lambda = 0.0;
    } else {
      throw ConfigError("unknown MVN variant '" + variant + "'");
    }
  }
  m.validate();
  return m;
}

void scale_iterations(RunManifest& m, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("scale must be a positive number");
  const double scaled = std::round(static_cast<double>(m.config.iterations) * scale);
  m.config.iterations = static_cast<std::size_t>(std::max(1.0, scaled));
}

}  // namespace grcgan::experiment
