#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "grcgan/data/circular.hpp"
#include "grcgan/data/mvn.hpp"
#include "grcgan/eval/sampler.hpp"

namespace grcgan::eval {

struct LabelReport {
  double label = 0.0;  // angle for circular runs, label index for MVN
  std::optional<double> hq_fraction;
  std::optional<bool> recovered;
  double w2 = 0.0;
};

struct ExperimentReport {
  std::vector<LabelReport> rows;
  double hq_fraction = 0.0;         // mean over labels, NaN when not applicable
  double recovered_fraction = 0.0;  // share of recovered labels, NaN when not applicable
  double mean_w2 = 0.0;
  std::size_t repetitions = 1;

  /// Recomputes the aggregates from `rows`.
  void finalize();
  /// Header `label,hq_frac,recovered,w2`, one row per label, then a row
  /// labelled `summary`. Missing fields are left empty.
  void write_csv(std::ostream& out) const;
};

struct CircularEvaluation {
  ExperimentReport report;
  RowMatrix samples;  // columns: label, y_1, y_2
};

/// For each label draws n_per_label samples from its own substream of
/// `seed`, then scores them against N((R sin x, R cos x), sigma^2 I).
CircularEvaluation evaluate_circular(const Sampler& g, const std::vector<double>& labels,
                                     const data::CircularSpec& spec, std::uint64_t seed,
                                     std::size_t n_per_label = 100);

struct MvnLabelDiagnostics {
  Eigen::RowVectorXd condition;
  double w2_exact = 0.0;  // fitted fakes against the exact conditional
  double w2_floor = 0.0;  // two independent fitted true-sample sets
};

struct MvnEvaluation {
  ExperimentReport report;
  std::vector<MvnLabelDiagnostics> diagnostics;
  double mean_w2_exact = 0.0;
  double mean_w2_floor = 0.0;
};

/// Labels come from the condition marginal. Each label compares a Gaussian
/// fitted to n_per_label fakes with one fitted to as many exact conditional
/// draws.
MvnEvaluation evaluate_mvn(const Sampler& g, const data::MvnSpec& spec, std::uint64_t seed,
                           std::size_t n_labels = 100, std::size_t n_per_label = 250);

}  // namespace grcgan::eval
