#include "grcgan/data/circular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grcgan/error.hpp"

namespace grcgan::data {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void CircularSpec::validate() const {
  if (!(radius > 0.0)) throw ConfigError("circle radius must be > 0");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (n_labels == 0 || samples_per_label == 0) throw ConfigError("label and sample counts must be >= 1");
  std::vector<Gap> sorted = gaps;
  std::sort(sorted.begin(), sorted.end(), [](const Gap& a, const Gap& b) { return a.begin < b.begin; });
  double covered = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& g = sorted[i];
    if (!(g.begin >= 0.0 && g.end > g.begin && g.end <= kTwoPi)) {
      throw ConfigError("gaps must be non-empty arcs inside [0, 2pi)");
    }
    if (i > 0 && g.begin < sorted[i - 1].end) throw ConfigError("gaps overlap");
    covered += g.end - g.begin;
  }
  if (covered >= kTwoPi) throw ConfigError("gaps cover the whole circle");
}

CircularSpec CircularSpec::full() { return CircularSpec{}; }

CircularSpec CircularSpec::partial() {
  CircularSpec spec;
  const double half = std::numbers::pi / 24.0;
  for (double centre : {std::numbers::pi / 3.0, std::numbers::pi, 5.0 * std::numbers::pi / 3.0}) {
    spec.gaps.push_back({centre - half, centre + half});
  }
  return spec;
}

void to_json(nlohmann::json& j, const CircularSpec& spec) {
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : spec.gaps) gaps.push_back({g.begin, g.end});
  j = nlohmann::json{{"radius", spec.radius},
                     {"sigma", spec.sigma},
                     {"n_labels", spec.n_labels},
                     {"samples_per_label", spec.samples_per_label},
                     {"gaps", gaps}};
}

void from_json(const nlohmann::json& j, CircularSpec& spec) {
  for (const auto& [key, _] : j.items()) {
    if (key != "radius" && key != "sigma" && key != "n_labels" && key != "samples_per_label" && key != "gaps") {
      throw ConfigError("unknown key '" + key + "' in circular dataset spec");
    }
  }
  spec.radius = j.at("radius").get<double>();
  spec.sigma = j.at("sigma").get<double>();
  spec.n_labels = j.at("n_labels").get<std::size_t>();
  spec.samples_per_label = j.at("samples_per_label").get<std::size_t>();
  spec.gaps.clear();
  for (const auto& g : j.at("gaps")) spec.gaps.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
  spec.validate();
}

CircularLabels circular_labels(const CircularSpec& spec) {
  spec.validate();
  CircularLabels labels;
  const auto n = static_cast<double>(spec.n_labels);
  if (spec.gaps.empty()) {
    labels.train = evaluation_angles(spec.n_labels);
    return labels;
  }
  std::vector<Gap> sorted = spec.gaps;
  std::sort(sorted.begin(), sorted.end(), [](const Gap& a, const Gap& b) { return a.begin < b.begin; });
  double gap_total = 0.0;
  for (const auto& g : sorted) gap_total += g.end - g.begin;
  const double allowed = kTwoPi - gap_total;
  // Walk the circle with the gaps squeezed out, then re-insert them.
  for (std::size_t i = 0; i < spec.n_labels; ++i) {
    double angle = allowed * (static_cast<double>(i) + 0.5) / n;
    for (const auto& g : sorted) {
      if (angle >= g.begin) angle += g.end - g.begin;
    }
    labels.train.push_back(angle);
  }
  for (const auto& g : sorted) labels.test.push_back(g.midpoint());
  return labels;
}

std::vector<double> evaluation_angles(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  return out;
}

LabeledDataset sample_circular(const CircularSpec& spec, const std::vector<double>& labels, Rng& rng) {
  spec.validate();
  const auto rows = static_cast<Eigen::Index>(labels.size() * spec.samples_per_label);
  LabeledDataset data;
  data.conditions.resize(rows, 1);
  data.outputs.resize(rows, 2);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::Index r = 0;
  for (double x : labels) {
    for (std::size_t s = 0; s < spec.samples_per_label; ++s, ++r) {
      data.conditions(r, 0) = x;
      data.outputs(r, 0) = spec.radius * std::sin(x) + spec.sigma * noise(rng);
      data.outputs(r, 1) = spec.radius * std::cos(x) + spec.sigma * noise(rng);
    }
  }
  data.provenance = {{"kind", "circular"}, {"spec", spec}};
  return data;
}

}  // namespace grcgan::data
