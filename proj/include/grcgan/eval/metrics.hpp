#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "grcgan/random.hpp"

namespace grcgan::eval {

/// Fraction of rows strictly closer than `threshold` to `center`.
double high_quality_fraction(const RowMatrix& samples, const Eigen::VectorXd& center, double threshold);

/// Number of rows strictly closer than `threshold` to `center`.
std::size_t high_quality_count(const RowMatrix& samples, const Eigen::VectorXd& center, double threshold);

/// Fraction of labels with at least one high-quality sample. Empty input gives 0.
double recovered_modes(const std::vector<std::size_t>& per_label_hq_counts);

}  // namespace grcgan::eval
