#include "grcgan/gan/config.hpp"

#include <cmath>
#include <set>
#include <string>

#include "grcgan/error.hpp"

namespace grcgan::gan {

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

nlohmann::json adam_json(const nn::AdamOptions& a) {
  return {{"lr", a.learning_rate}, {"beta1", a.beta1}, {"beta2", a.beta2}, {"eps", a.epsilon}};
}

nn::AdamOptions adam_from(const nlohmann::json& j, const char* where) {
  require_keys(j, {"lr", "beta1", "beta2", "eps"}, where);
  return {j.at("lr").get<double>(), j.at("beta1").get<double>(), j.at("beta2").get<double>(),
          j.at("eps").get<double>()};
}

}  // namespace

void GanConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (reg_form == RegForm::exact_fd && !(fd_step > 0.0)) throw ConfigError("finite-difference step h must be > 0");
  if (!(tau1 > 0.0)) throw ConfigError("tau1 must be > 0 (use +inf for no cap)");
  if (!(tau2 >= 0.0) || !std::isfinite(tau2)) throw ConfigError("tau2 must be finite and >= 0");
  if (!(perturbation.scale > 0.0)) throw ConfigError("perturbation scale must be > 0");
  if (perturbation.kind == PerturbationLaw::Kind::sphere_surface && perturbation.scale < tau2) {
    throw ConfigError("sphere radius must be >= tau2");
  }
  if (loss.kind == LossKind::wasserstein_gp && !(loss.gp_coeff >= 0.0)) throw ConfigError("gp_coeff must be >= 0");
  if (!(loss.gp_step > 0.0)) throw ConfigError("gp_step must be > 0");
  if (n_critic == 0) throw ConfigError("n_critic must be >= 1");
  if (batch_size < 2) throw ConfigError("batch size must be >= 2");
  if (noise_dim == 0) throw ConfigError("noise_dim must be >= 1");
}

GanConfig GanConfig::circular_preset() {
  GanConfig c;
  c.loss = {LossKind::vanilla_bce, 0.0, 1e-3, false};
  c.lambda = 0.02;
  c.reg_form = RegForm::exact_fd;
  c.fd_step = 1e-3;
  c.perturbation = {PerturbationLaw::Kind::sphere_surface, 0.1};
  c.n_critic = 1;
  c.batch_size = 128;
  c.iterations = 6000;
  c.noise_dim = 2;
  c.adam_generator = {5e-5, 0.5, 0.999, 1e-8};
  c.adam_discriminator = c.adam_generator;
  return c;
}

GanConfig GanConfig::mvn_preset(std::size_t output_dim) {
  GanConfig c;
  c.loss = {LossKind::wasserstein_gp, 0.1, 1e-3, false};
  c.lambda = 1.0;
  c.reg_form = RegForm::ratio;
  c.perturbation = {PerturbationLaw::Kind::sphere_surface, 0.1};
  c.n_critic = 1;
  c.batch_size = 256;
  c.iterations = 50000;
  c.noise_dim = output_dim;
  c.adam_generator = {2e-5, 0.5, 0.9, 1e-8};
  c.adam_discriminator = c.adam_generator;
  return c;
}

const char* to_string(ConditionEncoding encoding) {
  return encoding == ConditionEncoding::sin_cos ? "sin_cos" : "raw";
}

ConditionEncoding encoding_from_string(const std::string& name) {
  if (name == "sin_cos") return ConditionEncoding::sin_cos;
  if (name == "raw") return ConditionEncoding::raw;
  throw ConfigError("unknown condition encoding '" + name + "'");
}

void to_json(nlohmann::json& j, const GanConfig& c) {
  j = nlohmann::json{
      {"loss",
       {{"kind", c.loss.kind == LossKind::vanilla_bce ? "vanilla_bce" : "wasserstein_gp"},
        {"gp_coeff", c.loss.gp_coeff},
        {"gp_step", c.loss.gp_step},
        {"non_saturating", c.loss.non_saturating}}},
      {"lambda", c.lambda},
      {"reg_form", c.reg_form == RegForm::exact_fd ? "exact_fd" : "ratio"},
      {"fd_step", c.fd_step},
      {"tau1", std::isinf(c.tau1) ? nlohmann::json("inf") : nlohmann::json(c.tau1)},
      {"tau2", c.tau2},
      {"perturbation",
       {{"kind", c.perturbation.kind == PerturbationLaw::Kind::sphere_surface ? "sphere_surface"
                                                                              : "gaussian_iso"},
        {"scale", c.perturbation.scale}}},
      {"interpolate", c.interpolate},
      {"n_critic", c.n_critic},
      {"batch_size", c.batch_size},
      {"iterations", c.iterations},
      {"noise_dim", c.noise_dim},
      {"adam_generator", adam_json(c.adam_generator)},
      {"adam_discriminator", adam_json(c.adam_discriminator)},
      {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, GanConfig& c) {
  require_keys(j,
               {"loss", "lambda", "reg_form", "fd_step", "tau1", "tau2", "perturbation", "interpolate",
                "n_critic", "batch_size", "iterations", "noise_dim", "adam_generator",
                "adam_discriminator", "seed"},
               "gan config");
  const auto& loss = j.at("loss");
  require_keys(loss, {"kind", "gp_coeff", "gp_step", "non_saturating"}, "gan.loss");
  const auto kind = loss.at("kind").get<std::string>();
  if (kind == "vanilla_bce") {
    c.loss.kind = LossKind::vanilla_bce;
  } else if (kind == "wasserstein_gp") {
    c.loss.kind = LossKind::wasserstein_gp;
  } else {
    throw ConfigError("unknown loss kind '" + kind + "'");
  }
  c.loss.gp_coeff = loss.at("gp_coeff").get<double>();
  c.loss.gp_step = loss.at("gp_step").get<double>();
  c.loss.non_saturating = loss.at("non_saturating").get<bool>();
  c.lambda = j.at("lambda").get<double>();
  const auto form = j.at("reg_form").get<std::string>();
  if (form == "exact_fd") {
    c.reg_form = RegForm::exact_fd;
  } else if (form == "ratio") {
    c.reg_form = RegForm::ratio;
  } else {
    throw ConfigError("unknown reg_form '" + form + "'");
  }
  c.fd_step = j.at("fd_step").get<double>();
  const auto& tau1 = j.at("tau1");
  if (tau1.is_string()) {
    if (tau1.get<std::string>() != "inf") throw ConfigError("tau1 must be a number or \"inf\"");
    c.tau1 = std::numeric_limits<double>::infinity();
  } else {
    c.tau1 = tau1.get<double>();
  }
  c.tau2 = j.at("tau2").get<double>();
  const auto& pert = j.at("perturbation");
  require_keys(pert, {"kind", "scale"}, "gan.perturbation");
  const auto pkind = pert.at("kind").get<std::string>();
  if (pkind == "sphere_surface") {
    c.perturbation.kind = PerturbationLaw::Kind::sphere_surface;
  } else if (pkind == "gaussian_iso") {
    c.perturbation.kind = PerturbationLaw::Kind::gaussian_iso;
  } else {
    throw ConfigError("unknown perturbation kind '" + pkind + "'");
  }
  c.perturbation.scale = pert.at("scale").get<double>();
  c.interpolate = j.at("interpolate").get<bool>();
  c.n_critic = j.at("n_critic").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.iterations = j.at("iterations").get<std::size_t>();
  c.noise_dim = j.at("noise_dim").get<std::size_t>();
  c.adam_generator = adam_from(j.at("adam_generator"), "gan.adam_generator");
  c.adam_discriminator = adam_from(j.at("adam_discriminator"), "gan.adam_discriminator");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
}

}  // namespace grcgan::gan
