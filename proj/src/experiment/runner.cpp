#include "grcgan/experiment/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <ostream>

#include "grcgan/error.hpp"
#include "grcgan/eval/sampler.hpp"
#include "grcgan/gan/trainer.hpp"
#include "grcgan/nn/checkpoint.hpp"

namespace grcgan::experiment {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kEvalStream = 2;
constexpr std::size_t kProgressEvery = 1000;

/// Elapsed seconds with one decimal, formatted without touching the
/// caller's stream state.
std::string seconds_since(Clock::time_point start) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << std::chrono::duration<double>(Clock::now() - start).count();
  return s.str();
}

std::string short_number(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string run_label(const RunManifest& m, std::size_t rep) {
  std::string label = std::string(to_string(m.experiment)) + "/" + m.variant;
  if (m.experiment == ExperimentId::mvn_sweep) label += " p=" + std::to_string(m.dataset.p);
  return label + " rep " + std::to_string(rep + 1) + "/" + std::to_string(m.repetitions());
}

gan::GanConfig repetition_config(const RunManifest& m, std::size_t rep) {
  gan::GanConfig c = m.config;
  c.seed = m.seeds.at(rep);
  return c;
}

/// What a finished repetition must match to be reused.
nlohmann::json training_key(const RunManifest& m, std::size_t rep) {
  return {{"version", m.version},
          {"dataset", m.dataset},
          {"config", repetition_config(m, rep)},
          {"encoding", gan::to_string(m.encoding)},
          {"generator", m.generator},
          {"discriminator", m.discriminator}};
}

bool finished_run_matches(const fs::path& dir, const nlohmann::json& key) {
  const fs::path state = dir / "train_state.json";
  if (!fs::exists(state) || !fs::exists(dir / "generator.ckpt") || !fs::exists(dir / "discriminator.ckpt") ||
      !fs::exists(dir / "train_log.csv")) {
    return false;
  }
  std::ifstream in(state);
  nlohmann::json stored;
  try {
    in >> stored;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  return stored == key;
}

std::vector<double> circular_eval_labels(const RunManifest& m) {
  if (m.experiment == ExperimentId::circular_partial) return data::circular_labels(m.dataset.circular).test;
  return data::evaluation_angles(m.eval.n_labels);
}

void write_circular_plot_data(const fs::path& dir, const RunManifest& m, const RowMatrix& samples) {
  auto out = open_out(dir / "samples.csv");
  out << "label,y_1,y_2\n";
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    out << data::format_double(samples(i, 0)) << ',' << data::format_double(samples(i, 1)) << ','
        << data::format_double(samples(i, 2)) << '\n';
  }
  const auto& spec = m.dataset.circular;
  const auto labels = data::circular_labels(spec);
  auto overlays = open_out(dir / "overlays.csv");
  overlays << "kind,angle,center_1,center_2,radius\n";
  const auto emit = [&](const char* kind, const std::vector<double>& angles) {
    for (double a : angles) {
      overlays << kind << ',' << data::format_double(a) << ',' << data::format_double(spec.radius * std::sin(a)) << ','
               << data::format_double(spec.radius * std::cos(a)) << ','
               << data::format_double(spec.quality_threshold()) << '\n';
    }
  };
  emit("train", labels.train);
  emit("test", labels.test);
}

void write_mvn_plot_data(const fs::path& dir, const data::MvnSpec& spec, const eval::Sampler& sampler,
                         const eval::MvnEvaluation& ev, std::uint64_t seed, std::size_t n_per_label) {
  auto diag = open_out(dir / "diagnostics.csv");
  diag << "label,w2_exact,w2_floor";
  for (std::size_t j = 1; j <= spec.p; ++j) diag << ",x_" << j;
  diag << '\n';
  for (std::size_t i = 0; i < ev.diagnostics.size(); ++i) {
    const auto& d = ev.diagnostics[i];
    diag << i << ',' << data::format_double(d.w2_exact) << ',' << data::format_double(d.w2_floor);
    for (Eigen::Index j = 0; j < d.condition.size(); ++j) diag << ',' << data::format_double(d.condition(j));
    diag << '\n';
  }

  const double offsets[] = {-0.5, -0.25, 0.0, 0.25, 0.5};
  const RowMatrix panels = data::panel_conditions(spec);
  auto out = open_out(dir / "panel_samples.csv");
  out << "panel,offset,source";
  for (std::size_t j = 1; j <= spec.output_dim(); ++j) out << ",y_" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < panels.rows(); ++i) {
    Rng rng = substream(seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(i));
    const Eigen::RowVectorXd x = panels.row(i);
    const RowMatrix fake = sampler.draw(x, n_per_label, rng);
    const RowMatrix real = data::sample_gaussian(data::true_conditional(spec, x.transpose()), n_per_label, rng);
    const auto emit = [&](const char* source, const RowMatrix& ys) {
      for (Eigen::Index r = 0; r < ys.rows(); ++r) {
        out << i << ',' << data::format_double(offsets[i]) << ',' << source;
        for (Eigen::Index c = 0; c < ys.cols(); ++c) out << ',' << data::format_double(ys(r, c));
        out << '\n';
      }
    };
    emit("fake", fake);
    emit("true", real);
  }
}

/// Copies a finished repetition from `source` when it was trained from the
/// identical key, so shared runs are not trained twice.
void adopt_finished_run(const RunManifest& m, std::size_t rep, const fs::path& source, std::ostream& log) {
  const fs::path dir = repetition_dir(m, rep);
  const nlohmann::json key = training_key(m, rep);
  if (finished_run_matches(dir, key) || !finished_run_matches(source, key)) return;
  fs::create_directories(dir);
  for (const char* name : {"train_log.csv", "generator.ckpt", "discriminator.ckpt", "train_state.json"}) {
    fs::copy_file(source / name, dir / name, fs::copy_options::overwrite_existing);
  }
  log << run_label(m, rep) << ": adopted finished run from " << source.string() << '\n';
}

double pct(double fraction) { return std::isnan(fraction) ? fraction : 100.0 * fraction; }

}  // namespace

fs::path repetition_dir(const RunManifest& m, std::size_t rep) {
  return fs::path(m.output_dir) / ("rep" + std::to_string(rep));
}

data::MvnSpec mvn_spec(const RunManifest& m) {
  if (m.dataset.is_circular()) throw ConfigError("manifest does not describe MVN data");
  return data::make_mvn_params(m.dataset.k, m.dataset.p, m.dataset.param_seed);
}

data::LabeledDataset make_dataset(const RunManifest& m, std::size_t rep) {
  const std::uint64_t seed = m.seeds.at(rep);
  Rng rng = substream(seed, kDataStream);
  data::LabeledDataset ds;
  if (m.dataset.is_circular()) {
    const auto labels = data::circular_labels(m.dataset.circular);
    ds = data::sample_circular(m.dataset.circular, labels.train, rng);
  } else {
    ds = data::sample_mvn(mvn_spec(m), m.dataset.n, rng);
  }
  ds.provenance["seed"] = seed;
  ds.provenance["stream"] = kDataStream;
  return ds;
}

std::uint64_t evaluation_seed(const RunManifest& m, std::size_t rep) {
  Rng rng = substream(m.seeds.at(rep), kEvalStream);
  return rng();
}

void cmd_gen_data(const RunManifest& m, std::ostream& log) {
  m.validate();
  for (std::size_t rep = 0; rep < m.repetitions(); ++rep) {
    const fs::path dir = repetition_dir(m, rep);
    fs::create_directories(dir);
    const auto ds = make_dataset(m, rep);
    data::write_dataset_csv(dir / "data.csv", ds);
    auto out = open_out(dir / "data_manifest.json");
    out << ds.provenance.dump(2) << '\n';
    log << run_label(m, rep) << ": wrote " << ds.size() << " rows to " << (dir / "data.csv").string() << '\n';
  }
}

TrainSummary cmd_train(const RunManifest& m, std::ostream& log) {
  m.validate();
  TrainSummary summary;
  fs::create_directories(m.output_dir);
  save_manifest((fs::path(m.output_dir) / "manifest.json").string(), m);
  for (std::size_t rep = 0; rep < m.repetitions(); ++rep) {
    const fs::path dir = repetition_dir(m, rep);
    fs::create_directories(dir);
    const nlohmann::json key = training_key(m, rep);
    if (finished_run_matches(dir, key)) {
      log << run_label(m, rep) << ": finished run found, reusing it\n";
      ++summary.reused;
      continue;
    }
    fs::remove(dir / "train_state.json");
    const auto ds = make_dataset(m, rep);
    const gan::GanConfig config = repetition_config(m, rep);

    auto log_csv = open_out(dir / "train_log.csv");
    log_csv << gan::TrainingLog::csv_header() << '\n';
    const auto start = Clock::now();
    gan::TrainOptions options;
    options.on_iteration = [&](const gan::LogRow& row) {
      log_csv << gan::TrainingLog::csv_row(row) << '\n';
      log_csv.flush();
      if ((row.iter + 1) % kProgressEvery == 0) {
        log << run_label(m, rep) << ": iter " << (row.iter + 1) << '/' << config.iterations
            << "  d_loss " << short_number(row.d_loss) << "  g_adv " << short_number(row.g_adv) << "  g_reg "
            << short_number(row.g_reg) << "  (" << seconds_since(start) << " s)\n";
        log.flush();
      }
    };
    gan::TrainResult result = [&] {
      try {
        return gan::train(ds, m.generator, m.discriminator, config, m.encoding, options);
      } catch (const gan::TrainingDiverged& e) {
        log << run_label(m, rep) << ": diverged after " << e.log.rows.size() << " iterations: " << e.what() << '\n';
        throw;
      }
    }();
    nn::save_checkpoint(dir / "generator.ckpt", result.generator, result.rng);
    nn::save_checkpoint(dir / "discriminator.ckpt", result.discriminator, result.rng);
    auto state = open_out(dir / "train_state.json");
    state << key.dump(2) << '\n';
    log << run_label(m, rep) << ": trained " << config.iterations << " iterations in " << seconds_since(start)
        << " s\n";
    ++summary.trained;
  }
  return summary;
}

std::vector<RepetitionResult> cmd_eval(const RunManifest& m, std::ostream& log) {
  m.validate();
  std::vector<RepetitionResult> results;
  for (std::size_t rep = 0; rep < m.repetitions(); ++rep) {
    const fs::path dir = repetition_dir(m, rep);
    const auto ckpt = nn::load_checkpoint(dir / "generator.ckpt");
    if (!(ckpt.network.spec() == m.generator)) throw ShapeError("checkpoint does not match the manifest generator");
    const eval::Sampler sampler = eval::network_sampler(ckpt.network, m.encoding, m.config.noise_dim);
    const std::uint64_t seed = evaluation_seed(m, rep);
    RepetitionResult r;
    r.seed = m.seeds[rep];
    if (m.dataset.is_circular()) {
      auto ev = eval::evaluate_circular(sampler, circular_eval_labels(m), m.dataset.circular, seed,
                                        m.eval.n_per_label);
      write_circular_plot_data(dir, m, ev.samples);
      r.report = std::move(ev.report);
    } else {
      const auto spec = mvn_spec(m);
      auto ev = eval::evaluate_mvn(sampler, spec, seed, m.eval.n_labels, m.eval.n_per_label);
      write_mvn_plot_data(dir, spec, sampler, ev, seed, m.eval.n_per_label);
      r.mean_w2_exact = ev.mean_w2_exact;
      r.mean_w2_floor = ev.mean_w2_floor;
      r.report = std::move(ev.report);
    }
    auto report = open_out(dir / "report.csv");
    r.report.write_csv(report);
    log << run_label(m, rep) << ": mean W2 " << short_number(r.report.mean_w2);
    if (!std::isnan(r.report.hq_fraction)) {
      log << ", HQ " << short_number(pct(r.report.hq_fraction)) << "%, recovered "
          << short_number(pct(r.report.recovered_fraction)) << '%';
    }
    if (r.mean_w2_floor) {
      log << " (exact comparator " << short_number(*r.mean_w2_exact) << ", floor "
          << short_number(*r.mean_w2_floor) << ')';
    }
    log << '\n';
    results.push_back(std::move(r));
  }

  const auto field = [](double v) { return std::isnan(v) ? std::string() : data::format_double(v); };
  auto summary = open_out(fs::path(m.output_dir) / "summary.csv");
  summary << "rep,seed,hq_frac,recovered,mean_w2\n";
  double hq = 0.0, rec = 0.0, w2 = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& rep = results[i].report;
    summary << i << ',' << results[i].seed << ',' << field(rep.hq_fraction) << ',' << field(rep.recovered_fraction)
            << ',' << field(rep.mean_w2) << '\n';
    hq += rep.hq_fraction;
    rec += rep.recovered_fraction;
    w2 += rep.mean_w2;
  }
  const auto n = static_cast<double>(results.size());
  summary << "mean,," << field(hq / n) << ',' << field(rec / n) << ',' << field(w2 / n) << '\n';

  const nlohmann::json manifest_json = m;
  nlohmann::json meta = {{"config_hash", manifest_hash(manifest_json)},
                         {"seeds", m.seeds},
                         {"repetitions", m.repetitions()},
                         {"manifest", manifest_json}};
  auto meta_out = open_out(fs::path(m.output_dir) / "report_manifest.json");
  meta_out << meta.dump(2) << '\n';
  return results;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  const auto field = [](double v) { return std::isnan(v) ? std::string() : data::format_double(v); };
  out << "experiment,variant,p,rep,hq_pct,recovered_pct,mean_w2\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.variant << ',' << r.p << ',' << r.rep << ',' << field(r.hq_pct) << ','
        << field(r.recovered_pct) << ',' << field(r.mean_w2) << '\n';
  }
}

RunManifest reproduce_manifest(ExperimentId id, const std::string& variant, std::size_t p,
                               const ReproduceOptions& options) {
  RunManifest m = default_manifest(id, variant, p);
  m.seeds = repetition_seeds(options.base_seed, options.reps);
  scale_iterations(m, options.scale);
  m.output_dir = (options.out_dir / fs::path(m.output_dir).lexically_relative("runs")).string();
  m.validate();
  return m;
}

ReproduceResult cmd_reproduce(ExperimentId id, const ReproduceOptions& options, std::ostream& log) {
  if (options.reps == 0) throw ConfigError("reproduce needs at least one repetition");
  const auto start = Clock::now();
  std::vector<std::size_t> dims = {0};
  if (id == ExperimentId::mvn) dims = {8};
  if (id == ExperimentId::mvn_sweep) dims = options.sweep_dims;
  std::vector<std::string> variants = options.variants.empty() ? variants_for(id) : options.variants;

  ReproduceResult result;
  for (std::size_t p : dims) {
    for (const auto& variant : variants) {
      const RunManifest m = reproduce_manifest(id, variant, p, options);
      if (id == ExperimentId::mvn_sweep || id == ExperimentId::mvn) {
        const auto other = reproduce_manifest(id == ExperimentId::mvn ? ExperimentId::mvn_sweep : ExperimentId::mvn,
                                              variant, p, options);
        for (std::size_t rep = 0; rep < m.repetitions(); ++rep) {
          adopt_finished_run(m, rep, repetition_dir(other, rep), log);
        }
      }
      cmd_gen_data(m, log);
      cmd_train(m, log);
      const auto reps = cmd_eval(m, log);
      double hq = 0.0, rec = 0.0, w2 = 0.0;
      for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& r = reps[i].report;
        result.rows.push_back({to_string(id), variant, m.dataset.is_circular() ? 1 : m.dataset.p, std::to_string(i),
                               pct(r.hq_fraction), pct(r.recovered_fraction), r.mean_w2});
        hq += r.hq_fraction;
        rec += r.recovered_fraction;
        w2 += r.mean_w2;
      }
      const auto n = static_cast<double>(reps.size());
      result.rows.push_back({to_string(id), variant, m.dataset.is_circular() ? 1 : m.dataset.p, "mean",
                             pct(hq / n), pct(rec / n), w2 / n});
    }
  }
  const fs::path dir = options.out_dir / to_string(id);
  fs::create_directories(dir);
  result.aggregate_csv = dir / "aggregate.csv";
  auto out = open_out(result.aggregate_csv);
  write_aggregate_csv(out, result.rows);
  log << to_string(id) << ": wrote " << result.aggregate_csv.string() << " (wall clock " << seconds_since(start)
      << " s)\n";
  return result;
}

std::vector<std::string> check_thresholds(ExperimentId id, const ReproduceResult& result) {
  std::map<std::pair<std::string, std::size_t>, const AggregateRow*> means;
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> per_rep_w2;
  for (const auto& row : result.rows) {
    if (row.rep == "mean") {
      means[{row.variant, row.p}] = &row;
    } else {
      per_rep_w2[{row.variant, row.p}].push_back(row.mean_w2);
    }
  }
  std::vector<std::string> failures;
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const auto find = [&](const std::string& variant, std::size_t p) -> const AggregateRow* {
    auto it = means.find({variant, p});
    return it == means.end() ? nullptr : it->second;
  };

  if (id == ExperimentId::circular_full || id == ExperimentId::circular_partial) {
    const AggregateRow* gr = find("gr-exact", 1);
    if (!gr) return {"gr-exact variant missing"};
    need(gr->recovered_pct == 100.0, "gr-exact recovered modes below 100%");
    if (id == ExperimentId::circular_full) {
      need(gr->hq_pct >= 88.0, "gr-exact high-quality share below 88%");
      need(gr->mean_w2 <= 0.05, "gr-exact mean W2 above 0.05");
    } else {
      need(gr->mean_w2 <= 0.06, "gr-exact mean W2 above 0.06");
      const auto& a = per_rep_w2[{"degenerate", 1}];
      const auto& b = per_rep_w2[{"gr-exact", 1}];
      if (a.size() != b.size() || a.empty()) {
        failures.push_back("degenerate variant missing");
      } else {
        std::size_t wins = 0;
        for (std::size_t i = 0; i < a.size(); ++i) wins += a[i] > b[i] ? 1 : 0;
        need(3 * wins >= 2 * a.size(), "degenerate W2 exceeds gr-exact in fewer than 2/3 of repetitions");
      }
    }
  } else {
    std::set<std::size_t> dims;
    for (const auto& [key, _] : means) dims.insert(key.second);
    for (std::size_t p : dims) {
      const AggregateRow* gr = find("gr", p);
      const AggregateRow* cgan = find("cgan", p);
      if (!gr || !cgan) {
        failures.push_back("missing variant at p=" + std::to_string(p));
        continue;
      }
      if (id == ExperimentId::mvn) {
        need(gr->mean_w2 < cgan->mean_w2, "GR-cGAN mean W2 not below cGAN at p=" + std::to_string(p));
      } else {
        need(gr->mean_w2 <= cgan->mean_w2, "GR-cGAN mean W2 above cGAN at p=" + std::to_string(p));
      }
    }
  }
  return failures;
}

}  // namespace grcgan::experiment
