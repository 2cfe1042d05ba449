#include "grcgan/eval/metrics.hpp"

#include <algorithm>

#include "grcgan/error.hpp"

namespace grcgan::eval {

std::size_t high_quality_count(const RowMatrix& samples, const Eigen::VectorXd& center, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  if (samples.cols() != center.size()) throw ShapeError("sample and center dimensions differ");
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    if ((samples.row(i).transpose() - center).norm() < threshold) ++count;
  }
  return count;
}

double high_quality_fraction(const RowMatrix& samples, const Eigen::VectorXd& center, double threshold) {
  if (samples.rows() == 0) throw ShapeError("high_quality_fraction of an empty sample set");
  return static_cast<double>(high_quality_count(samples, center, threshold)) / static_cast<double>(samples.rows());
}

double recovered_modes(const std::vector<std::size_t>& per_label_hq_counts) {
  if (per_label_hq_counts.empty()) return 0.0;
  const auto hits = std::count_if(per_label_hq_counts.begin(), per_label_hq_counts.end(),
                                  [](std::size_t c) { return c >= 1; });
  return static_cast<double>(hits) / static_cast<double>(per_label_hq_counts.size());
}

}  // namespace grcgan::eval
