#include "grcgan/data/mvn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "grcgan/error.hpp"

namespace grcgan::data {

namespace {

constexpr double kPsdTolerance = 1e-10;
constexpr double kClampTolerance = 1e-12;

}  // namespace

void GaussianSpec::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) throw ShapeError("Gaussian mean/cov shapes differ");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kPsdTolerance) throw ConfigError("covariance is not symmetric");
  if (cov.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTolerance) throw ConfigError("covariance is not PSD");
  }
}

void MvnSpec::validate() const {
  if (p == 0 || p >= k) throw ConfigError("need 1 <= p < k");
  if (mu.size() != static_cast<Eigen::Index>(k) || sigma.rows() != static_cast<Eigen::Index>(k) ||
      sigma.cols() != static_cast<Eigen::Index>(k)) {
    throw ShapeError("MVN parameters do not match k");
  }
  GaussianSpec{mu, sigma}.validate();
}

void to_json(nlohmann::json& j, const MvnSpec& spec) {
  nlohmann::json sigma = nlohmann::json::array();
  for (Eigen::Index r = 0; r < spec.sigma.rows(); ++r) {
    sigma.push_back(std::vector<double>(spec.sigma.row(r).begin(), spec.sigma.row(r).end()));
  }
  j = nlohmann::json{{"k", spec.k},
                     {"p", spec.p},
                     {"mu", std::vector<double>(spec.mu.begin(), spec.mu.end())},
                     {"sigma", sigma}};
}

void from_json(const nlohmann::json& j, MvnSpec& spec) {
  for (const auto& [key, _] : j.items()) {
    if (key != "k" && key != "p" && key != "mu" && key != "sigma") {
      throw ConfigError("unknown key '" + key + "' in MVN spec");
    }
  }
  spec.k = j.at("k").get<std::size_t>();
  spec.p = j.at("p").get<std::size_t>();
  const auto mu = j.at("mu").get<std::vector<double>>();
  spec.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  const auto& rows = j.at("sigma");
  spec.sigma.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = rows[r].get<std::vector<double>>();
    if (row.size() != rows.size()) throw ShapeError("MVN sigma must be square");
    for (std::size_t c = 0; c < row.size(); ++c) {
      spec.sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  spec.validate();
}

MvnSpec make_mvn_params(std::size_t k, std::size_t p, std::uint64_t seed) {
  if (k < 2) throw ConfigError("MVN dimension k must be >= 2");
  Rng rng = make_rng(seed);
  const auto n = static_cast<Eigen::Index>(k);
  MvnSpec spec;
  spec.k = k;
  spec.p = p;
  spec.mu = uniform_matrix(n, 1, 10.0, 15.0, rng).col(0);
  const Eigen::MatrixXd a = uniform_matrix(n, 2 * n, -1.0, 1.0, rng);
  Eigen::MatrixXd gram = a * a.transpose();
  gram *= 0.25 / gram.cwiseAbs().maxCoeff();
  gram = (0.5 * (gram + gram.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.eigenvalues().minCoeff() < -kClampTolerance) throw ConfigError("rescaled covariance is indefinite");
  if (eig.eigenvalues().minCoeff() < 0.0) {
    const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
    gram = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
    gram = (0.5 * (gram + gram.transpose())).eval();
  }
  spec.sigma = gram;
  spec.validate();
  return spec;
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() < -kPsdTolerance) throw ConfigError("covariance is not PSD");
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

RowMatrix sample_gaussian(const GaussianSpec& g, std::size_t n, Rng& rng) {
  const Eigen::MatrixXd factor = covariance_factor(g.cov);
  const RowMatrix z = standard_normal(static_cast<Eigen::Index>(n), g.mean.size(), rng);
  RowMatrix out = z * factor.transpose();
  out.rowwise() += g.mean.transpose();
  return out;
}

LabeledDataset sample_mvn(const MvnSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  const RowMatrix draws = sample_gaussian({spec.mu, spec.sigma}, n, rng);
  const auto p = static_cast<Eigen::Index>(spec.p);
  LabeledDataset data;
  data.conditions = draws.leftCols(p);
  data.outputs = draws.rightCols(static_cast<Eigen::Index>(spec.k) - p);
  data.provenance = {{"kind", "mvn"}, {"spec", spec}};
  return data;
}

Eigen::VectorXd condition_stddev(const MvnSpec& spec) {
  return spec.sigma.diagonal().head(static_cast<Eigen::Index>(spec.p)).cwiseMax(0.0).cwiseSqrt();
}

RowMatrix panel_conditions(const MvnSpec& spec) {
  const double offsets[] = {-0.5, -0.25, 0.0, 0.25, 0.5};
  const Eigen::VectorXd sd = condition_stddev(spec);
  const auto p = static_cast<Eigen::Index>(spec.p);
  RowMatrix out(5, p);
  for (Eigen::Index i = 0; i < 5; ++i) out.row(i) = (spec.mu.head(p) + offsets[i] * sd).transpose();
  return out;
}

GaussianSpec true_conditional(const MvnSpec& spec, const Eigen::VectorXd& x) {
  spec.validate();
  const auto p = static_cast<Eigen::Index>(spec.p);
  const auto q = static_cast<Eigen::Index>(spec.k) - p;
  if (x.size() != p) throw ShapeError("condition has the wrong dimension");
  Eigen::MatrixXd sxx = spec.sigma.topLeftCorner(p, p);
  const Eigen::MatrixXd syx = spec.sigma.bottomLeftCorner(q, p);
  const Eigen::MatrixXd syy = spec.sigma.bottomRightCorner(q, q);
  Eigen::LLT<Eigen::MatrixXd> llt(sxx);
  if (llt.info() != Eigen::Success) {
    sxx += 1e-10 * Eigen::MatrixXd::Identity(p, p);
    llt.compute(sxx);
    if (llt.info() != Eigen::Success) throw ConfigError("condition covariance is singular");
  }
  const Eigen::MatrixXd gain = llt.solve(syx.transpose()).transpose();  // S_yx S_xx^-1
  GaussianSpec out;
  out.mean = spec.mu.tail(q) + gain * (x - spec.mu.head(p));
  out.cov = syy - gain * syx.transpose();
  out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  return out;
}

}  // namespace grcgan::data
