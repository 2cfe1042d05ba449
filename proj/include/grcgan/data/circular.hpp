#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "grcgan/data/dataset.hpp"

namespace grcgan::data {

/// Closed arc [begin, end] of angles excluded from training.
struct Gap {
  double begin = 0.0;
  double end = 0.0;

  double midpoint() const { return 0.5 * (begin + end); }
  bool contains(double angle) const { return angle > begin && angle < end; }
};

/// y | x ~ N((R sin x, R cos x), sigma^2 I) on training angles x.
struct CircularSpec {
  double radius = 1.0;
  double sigma = 0.2;
  std::size_t n_labels = 120;
  std::size_t samples_per_label = 10;
  std::vector<Gap> gaps;

  /// Throws ConfigError when gaps overlap, leave [0, 2pi), or cover it.
  void validate() const;
  /// Radius of the disc holding ~90% of each component: 2.15 sigma.
  double quality_threshold() const { return 2.15 * sigma; }

  static CircularSpec full();
  /// Three gaps of width pi/12 centred at pi/3, pi and 5pi/3.
  static CircularSpec partial();
};

void to_json(nlohmann::json& j, const CircularSpec& spec);
void from_json(const nlohmann::json& j, CircularSpec& spec);

struct CircularLabels {
  std::vector<double> train;
  std::vector<double> test;  // gap midpoints
};

/// Full circle: x_i = 2 pi i / n. With gaps: n angles evenly spaced along
/// the allowed arcs at half-step offsets, so the nearest label sits half a
/// spacing from each gap edge.
CircularLabels circular_labels(const CircularSpec& spec);

/// `n` angles 2 pi i / n, i = 0..n-1.
std::vector<double> evaluation_angles(std::size_t n);

LabeledDataset sample_circular(const CircularSpec& spec, const std::vector<double>& labels, Rng& rng);

}  // namespace grcgan::data
