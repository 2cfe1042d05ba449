#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "grcgan/data/circular.hpp"
#include "grcgan/data/dataset.hpp"
#include "grcgan/data/mvn.hpp"
#include "grcgan/error.hpp"
#include "support/oracles.hpp"

using namespace grcgan;
using grcgan::RowMatrix;

constexpr double kPi = std::numbers::pi;

TEST_CASE("full circle has 120 equispaced labels and no test labels") {
  const auto labels = data::circular_labels(data::CircularSpec::full());
  REQUIRE(labels.train.size() == 120);
  CHECK(labels.test.empty());
  CHECK(labels.train[0] == 0.0);
  for (std::size_t i = 1; i < 120; ++i) {
    CHECK(labels.train[i] - labels.train[i - 1] == doctest::Approx(2.0 * kPi / 120.0));
  }
  CHECK(labels.train.back() < 2.0 * kPi);
}

TEST_CASE("partial circle keeps 120 labels out of three gaps with midpoint test labels") {
  const auto spec = data::CircularSpec::partial();
  REQUIRE(spec.gaps.size() == 3);
  const auto labels = data::circular_labels(spec);
  CHECK(labels.train.size() == 120);
  REQUIRE(labels.test.size() == 3);
  for (double angle : labels.train) {
    for (const auto& gap : spec.gaps) CHECK_FALSE(gap.contains(angle));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& gap = spec.gaps[i];
    CHECK(gap.end - gap.begin == doctest::Approx(kPi / 12.0));
    CHECK(labels.test[i] == doctest::Approx(gap.begin + kPi / 24.0));
  }
  CHECK(labels.test[0] == doctest::Approx(kPi / 3.0));
  CHECK(labels.test[1] == doctest::Approx(kPi));
  CHECK(labels.test[2] == doctest::Approx(5.0 * kPi / 3.0));
}

TEST_CASE("overlapping or circle-covering gaps are rejected") {
  auto spec = data::CircularSpec::full();
  spec.gaps = {{0.5, 1.0}, {0.9, 1.2}};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.gaps = {{0.0, 2.0 * kPi}};
  CHECK_THROWS(data::circular_labels(spec));
}

TEST_CASE("zero spread puts every sample on its circle mean") {
  auto spec = data::CircularSpec::full();
  spec.sigma = 0.0;
  Rng rng = make_rng(1);
  const auto labels = data::circular_labels(spec);
  const auto ds = data::sample_circular(spec, labels.train, rng);
  CHECK(ds.size() == 1200);
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    const double x = ds.conditions(i, 0);
    CHECK(ds.outputs(i, 0) == doctest::Approx(std::sin(x)));
    CHECK(ds.outputs(i, 1) == doctest::Approx(std::cos(x)));
  }
}

TEST_CASE("default circular dataset has 1200 rows and a 0.43 quality radius") {
  const auto spec = data::CircularSpec::full();
  Rng rng = make_rng(2);
  const auto ds = data::sample_circular(spec, data::circular_labels(spec).train, rng);
  CHECK(ds.conditions.rows() == 1200);
  CHECK(ds.outputs.cols() == 2);
  CHECK(spec.quality_threshold() == doctest::Approx(0.43));
}

TEST_CASE("Monte Carlo mean of circular samples at pi/2 is (1, 0)") {
  const auto spec = data::CircularSpec::full();
  Rng rng = make_rng(3);
  const std::vector<double> labels(100000, kPi / 2.0);
  auto one = spec;
  one.samples_per_label = 1;
  const auto ds = data::sample_circular(one, labels, rng);
  const double tol = 3.0 * spec.sigma / std::sqrt(1e5);
  CHECK(std::abs(ds.outputs.col(0).mean() - 1.0) < tol);
  CHECK(std::abs(ds.outputs.col(1).mean()) < tol);
}

TEST_CASE("circular generation is a pure function of spec and seed") {
  const auto spec = data::CircularSpec::partial();
  const auto labels = data::circular_labels(spec).train;
  Rng a = make_rng(9), b = make_rng(9);
  CHECK(data::sample_circular(spec, labels, a).outputs == data::sample_circular(spec, labels, b).outputs);
}

TEST_CASE("MVN parameters respect the entry ranges and are PSD") {
  for (std::uint64_t seed : {1u, 2u, 3u, 77u}) {
    for (std::size_t k : {2u, 7u, 10u, 17u}) {
      const auto spec = data::make_mvn_params(k, std::max<std::size_t>(1, k - 2), seed);
      CHECK(spec.mu.size() == static_cast<Eigen::Index>(k));
      CHECK(spec.mu.minCoeff() >= 10.0);
      CHECK(spec.mu.maxCoeff() <= 15.0);
      CHECK(spec.sigma.cwiseAbs().maxCoeff() <= 0.25 + 1e-15);
      CHECK((spec.sigma - spec.sigma.transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.sigma);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
  }
  CHECK_THROWS(data::make_mvn_params(1, 0, 1));
}

TEST_CASE("MVN sampling splits rows into condition and output blocks") {
  const auto spec = data::make_mvn_params(10, 8, 5);
  Rng rng = make_rng(6);
  const auto ds = data::sample_mvn(spec, 1000, rng);
  CHECK(ds.conditions.rows() == 1000);
  CHECK(ds.conditions.cols() == 8);
  CHECK(ds.outputs.cols() == 2);
}

TEST_CASE("zero covariance reproduces the mean in every row") {
  auto spec = data::make_mvn_params(4, 2, 5);
  spec.sigma.setZero();
  Rng rng = make_rng(6);
  const auto ds = data::sample_mvn(spec, 10, rng);
  for (Eigen::Index i = 0; i < 10; ++i) {
    CHECK(ds.conditions.row(i).transpose().isApprox(spec.mu.head(2)));
    CHECK(ds.outputs.row(i).transpose().isApprox(spec.mu.tail(2)));
  }
}

TEST_CASE("sample covariance of a million MVN draws matches the parameters") {
  const auto spec = data::make_mvn_params(10, 8, 11);
  Rng rng = make_rng(12);
  const auto ds = data::sample_mvn(spec, 1000000, rng);
  RowMatrix joint(ds.size(), 10);
  joint << ds.conditions, ds.outputs;
  const Eigen::RowVectorXd mean = joint.colwise().mean();
  const RowMatrix centered = joint.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(ds.size() - 1);
  CHECK((cov - spec.sigma).cwiseAbs().maxCoeff() < 5e-3);
}

namespace {

data::MvnSpec bivariate(double rho) {
  data::MvnSpec spec;
  spec.k = 2;
  spec.p = 1;
  spec.mu = Eigen::Vector2d(12.0, 11.0);
  spec.sigma = Eigen::Matrix2d{{1.0, rho}, {rho, 1.0}};
  return spec;
}

}  // namespace

TEST_CASE("scalar conditioning with correlation 0.2") {
  const auto spec = bivariate(0.2);
  Eigen::VectorXd x(1);
  x << 13.0;
  const auto cond = data::true_conditional(spec, x);
  CHECK(cond.mean(0) == doctest::Approx(11.2));
  CHECK(cond.cov(0, 0) == doctest::Approx(0.96));

  Rng rng = make_rng(13);
  const auto mc = oracle::rejection_conditional(spec.mu, spec.sigma, 13.0, 0.01, 40000, rng);
  // standard errors: sqrt(0.96 / 4e4) ~ 4.9e-3 for the mean; window bias is O(window^2)
  CHECK(std::abs(mc.mean - cond.mean(0)) < 0.02);
  CHECK(std::abs(mc.variance - cond.cov(0, 0)) < 0.03);
}

TEST_CASE("conditioning at the mean returns the output mean") {
  const auto spec = data::make_mvn_params(10, 8, 3);
  const auto cond = data::true_conditional(spec, spec.mu.head(8));
  CHECK(cond.mean.isApprox(spec.mu.tail(2), 1e-12));
}

TEST_CASE("independent blocks condition to the marginal") {
  auto spec = data::make_mvn_params(5, 3, 3);
  spec.sigma.topRightCorner(3, 2).setZero();
  spec.sigma.bottomLeftCorner(2, 3).setZero();
  Rng rng = make_rng(1);
  const Eigen::VectorXd x = spec.mu.head(3) + Eigen::VectorXd::Constant(3, 0.7);
  const auto cond = data::true_conditional(spec, x);
  CHECK(cond.mean.isApprox(spec.mu.tail(2)));
  CHECK(cond.cov.isApprox(spec.sigma.bottomRightCorner(2, 2)));
}

TEST_CASE("conditional covariance is PSD and does not depend on x") {
  const auto spec = data::make_mvn_params(10, 8, 21);
  Rng rng = make_rng(22);
  const auto ds = data::sample_mvn(spec, 2000, rng);
  const auto first = data::true_conditional(spec, ds.conditions.row(0).transpose());
  Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(2);
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    const auto cond = data::true_conditional(spec, ds.conditions.row(i).transpose());
    CHECK(cond.cov.isApprox(first.cov, 1e-12));
    mean_sum += cond.mean;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(first.cov);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  // Law of total expectation: the average conditional mean is the output mean.
  const Eigen::VectorXd avg = mean_sum / static_cast<double>(ds.size());
  const double se = std::sqrt(spec.sigma.bottomRightCorner(2, 2).diagonal().maxCoeff() / 2000.0);
  CHECK((avg - spec.mu.tail(2)).cwiseAbs().maxCoeff() < 4.0 * se);
}

TEST_CASE("panel conditions step through mean plus and minus multiples of the stddev") {
  const auto spec = data::make_mvn_params(10, 8, 4);
  const RowMatrix panel = data::panel_conditions(spec);
  REQUIRE(panel.rows() == 5);
  const Eigen::VectorXd sd = data::condition_stddev(spec);
  const double offsets[] = {-0.5, -0.25, 0.0, 0.25, 0.5};
  for (int r = 0; r < 5; ++r) {
    CHECK(panel.row(r).transpose().isApprox(spec.mu.head(8) + offsets[r] * sd));
  }
}

TEST_CASE("invalid MVN specs are rejected") {
  auto spec = data::make_mvn_params(4, 2, 1);
  spec.sigma(0, 1) += 0.1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = data::make_mvn_params(4, 2, 1);
  spec.p = 4;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("dataset CSV round trip is exact and the header names every column") {
  const auto spec = data::make_mvn_params(5, 3, 8);
  Rng rng = make_rng(8);
  const auto ds = data::sample_mvn(spec, 50, rng);
  std::ostringstream text;
  data::write_dataset_csv(text, ds);
  CHECK(text.str().rfind("x_1,x_2,x_3,y_1,y_2\n", 0) == 0);
  const auto path = std::filesystem::temp_directory_path() / "grcgan_dataset_test.csv";
  data::write_dataset_csv(path, ds);
  const auto back = data::read_dataset_csv(path, 3);
  std::filesystem::remove(path);
  CHECK(back.conditions == ds.conditions);
  CHECK(back.outputs == ds.outputs);
}

TEST_CASE("MVN spec JSON round trip is exact") {
  const auto spec = data::make_mvn_params(6, 4, 2);
  const auto back = nlohmann::json(spec).get<data::MvnSpec>();
  CHECK(back.mu == spec.mu);
  CHECK(back.sigma == spec.sigma);
  CHECK(back.p == 4);
}
