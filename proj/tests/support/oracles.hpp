#pragma once

// Independent reference computations used only by tests.

#include <Eigen/Core>

#include "grcgan/random.hpp"

namespace grcgan::oracle {

// Exact optimal assignment between two equally sized point clouds under
// squared Euclidean cost (Hungarian method, O(n^3)). Returns the square
// root of the mean matched cost, i.e. the empirical 2-Wasserstein distance
// between the two uniform empirical measures.
double assignment_w2(const RowMatrix& a, const RowMatrix& b);

struct ScalarMoments {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t accepted = 0;
};

// Moments of y given x near x0 for a bivariate normal (x, y), estimated by
// drawing joint samples and keeping those with |x - x0| < window.
ScalarMoments rejection_conditional(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov, double x0,
                                    double window, std::size_t target, Rng& rng);

}  // namespace grcgan::oracle
