#include "grcgan/eval/evaluate.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "grcgan/data/dataset.hpp"
#include "grcgan/error.hpp"
#include "grcgan/eval/gaussian.hpp"
#include "grcgan/eval/metrics.hpp"

namespace grcgan::eval {

void ExperimentReport::finalize() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (rows.empty()) {
    hq_fraction = recovered_fraction = mean_w2 = nan;
    return;
  }
  double hq = 0.0;
  double w2 = 0.0;
  std::size_t with_hq = 0;
  std::size_t with_recovery = 0;
  std::size_t recovered = 0;
  for (const auto& row : rows) {
    w2 += row.w2;
    if (row.hq_fraction) {
      hq += *row.hq_fraction;
      ++with_hq;
    }
    if (row.recovered) {
      ++with_recovery;
      if (*row.recovered) ++recovered;
    }
  }
  const auto n = static_cast<double>(rows.size());
  mean_w2 = w2 / n;
  hq_fraction = with_hq ? hq / static_cast<double>(with_hq) : nan;
  recovered_fraction = with_recovery ? static_cast<double>(recovered) / static_cast<double>(with_recovery) : nan;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  const auto field = [](double v) { return std::isnan(v) ? std::string() : data::format_double(v); };
  out << "label,hq_frac,recovered,w2\n";
  for (const auto& row : rows) {
    out << data::format_double(row.label) << ',' << (row.hq_fraction ? data::format_double(*row.hq_fraction) : "")
        << ',' << (row.recovered ? (*row.recovered ? "1" : "0") : "") << ',' << data::format_double(row.w2) << '\n';
  }
  out << "summary," << field(hq_fraction) << ',' << field(recovered_fraction) << ',' << field(mean_w2) << '\n';
}

CircularEvaluation evaluate_circular(const Sampler& g, const std::vector<double>& labels,
                                     const data::CircularSpec& spec, std::uint64_t seed,
                                     std::size_t n_per_label) {
  spec.validate();
  if (n_per_label < 3) throw ConfigError("circular evaluation needs at least 3 samples per label");
  CircularEvaluation result;
  result.samples.resize(static_cast<Eigen::Index>(labels.size() * n_per_label), 3);
  const double threshold = spec.quality_threshold();
  data::GaussianSpec truth;
  truth.cov = spec.sigma * spec.sigma * Eigen::MatrixXd::Identity(2, 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double x = labels[i];
    Rng rng = substream(seed, i);
    const RowMatrix fake = g.draw(Eigen::RowVectorXd::Constant(1, x), n_per_label, rng);
    if (fake.cols() != 2) throw ShapeError("circular generator must emit 2-D samples");
    truth.mean = Eigen::Vector2d(spec.radius * std::sin(x), spec.radius * std::cos(x));
    const std::size_t hits = high_quality_count(fake, truth.mean, threshold);
    LabelReport row;
    row.label = x;
    row.hq_fraction = static_cast<double>(hits) / static_cast<double>(n_per_label);
    row.recovered = hits >= 1;
    row.w2 = w2_gaussians(gaussian_fit(fake), truth);
    result.report.rows.push_back(row);
    const auto offset = static_cast<Eigen::Index>(i * n_per_label);
    result.samples.block(offset, 0, fake.rows(), 1).setConstant(x);
    result.samples.block(offset, 1, fake.rows(), 2) = fake;
  }
  result.report.finalize();
  return result;
}

MvnEvaluation evaluate_mvn(const Sampler& g, const data::MvnSpec& spec, std::uint64_t seed,
                           std::size_t n_labels, std::size_t n_per_label) {
  spec.validate();
  const auto p = static_cast<Eigen::Index>(spec.p);
  MvnEvaluation result;
  Rng label_rng = substream(seed, 0);
  const data::GaussianSpec marginal{spec.mu.head(p), spec.sigma.topLeftCorner(p, p)};
  const RowMatrix conditions = data::sample_gaussian(marginal, n_labels, label_rng);
  double exact_sum = 0.0;
  double floor_sum = 0.0;
  for (std::size_t i = 0; i < n_labels; ++i) {
    Rng rng = substream(seed, i + 1);
    const Eigen::RowVectorXd x = conditions.row(static_cast<Eigen::Index>(i));
    const data::GaussianSpec truth = data::true_conditional(spec, x.transpose());
    const GaussianSpec true_fit = gaussian_fit(data::sample_gaussian(truth, n_per_label, rng));
    const GaussianSpec fake_fit = gaussian_fit(g.draw(x, n_per_label, rng));
    const GaussianSpec second_fit = gaussian_fit(data::sample_gaussian(truth, n_per_label, rng));
    LabelReport row;
    row.label = static_cast<double>(i);
    row.w2 = w2_gaussians(fake_fit, true_fit);
    result.report.rows.push_back(row);
    MvnLabelDiagnostics diag{x, w2_gaussians(fake_fit, truth), w2_gaussians(true_fit, second_fit)};
    exact_sum += diag.w2_exact;
    floor_sum += diag.w2_floor;
    result.diagnostics.push_back(diag);
  }
  result.report.finalize();
  if (n_labels > 0) {
    result.mean_w2_exact = exact_sum / static_cast<double>(n_labels);
    result.mean_w2_floor = floor_sum / static_cast<double>(n_labels);
  }
  return result;
}

}  // namespace grcgan::eval
