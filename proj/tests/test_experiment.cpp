#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "grcgan/data/dataset.hpp"
#include "grcgan/error.hpp"
#include "grcgan/experiment/gradient_suite.hpp"
#include "grcgan/experiment/manifest.hpp"
#include "grcgan/experiment/runner.hpp"
#include "grcgan/nn/ops.hpp"

using namespace grcgan;
using namespace grcgan::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("grcgan_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t line_count(const fs::path& path) {
  const std::string text = slurp(path);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

RunManifest tiny(ExperimentId id, const std::string& variant, const fs::path& out, std::size_t p = 8) {
  RunManifest m = default_manifest(id, variant, p);
  m.config.iterations = 12;
  m.config.batch_size = 16;
  m.eval.n_labels = 12;
  m.eval.n_per_label = 20;
  if (!m.dataset.is_circular()) {
    m.generator.hidden.assign(1, {16, nn::Activation::leaky_relu(0.1), false});
    m.discriminator.hidden.assign(1, {16, nn::Activation::leaky_relu(0.1), false});
    m.dataset.n = 100;
  }
  m.seeds = {1, 2};
  m.output_dir = out.string();
  return m;
}

}  // namespace

TEST_CASE("manifest JSON round trip is exact") {
  for (auto id : {ExperimentId::circular_full, ExperimentId::circular_partial, ExperimentId::mvn,
                  ExperimentId::mvn_sweep}) {
    for (const auto& variant : variants_for(id)) {
      const RunManifest m = default_manifest(id, variant, 11);
      const nlohmann::json j = m;
      CHECK(nlohmann::json(j.get<RunManifest>()) == j);
    }
  }
}

TEST_CASE("manifest parsing rejects missing keys, unknown keys and other versions") {
  nlohmann::json j = default_manifest(ExperimentId::circular_full, "gr-exact");
  auto missing = j;
  missing.erase("seeds");
  CHECK_THROWS(missing.get<RunManifest>());
  auto extra = j;
  extra["surprise"] = 1;
  CHECK_THROWS(extra.get<RunManifest>());
  auto old = j;
  old["version"] = kManifestVersion + 1;
  CHECK_THROWS(old.get<RunManifest>().validate());
}

TEST_CASE("manifest file round trip through disk") {
  const fs::path dir = scratch("manifest_io");
  fs::create_directories(dir);
  const RunManifest m = default_manifest(ExperimentId::mvn_sweep, "gr", 5);
  save_manifest((dir / "m.json").string(), m);
  CHECK(nlohmann::json(load_manifest((dir / "m.json").string())) == nlohmann::json(m));
  CHECK_THROWS(load_manifest((dir / "missing.json").string()));
  fs::remove_all(dir);
}

TEST_CASE("variant presets") {
  const auto full = default_manifest(ExperimentId::circular_full, "gr-exact");
  CHECK(full.config.lambda == 0.02);
  CHECK(full.config.reg_form == gan::RegForm::exact_fd);
  CHECK(full.config.iterations == 6000);
  CHECK(full.eval.n_labels == 360);
  CHECK(full.seeds.size() == 3);
  CHECK(default_manifest(ExperimentId::circular_full, "degenerate").config.lambda == 0.0);
  CHECK(default_manifest(ExperimentId::circular_full, "gr-ratio").config.reg_form == gan::RegForm::ratio);
  CHECK_FALSE(default_manifest(ExperimentId::circular_partial, "no-interp").config.interpolate);
  const auto mvn = default_manifest(ExperimentId::mvn, "gr", 5);
  CHECK(mvn.dataset.p == 8);  // the single-size experiment always uses p = 8
  CHECK(mvn.dataset.k == 10);
  CHECK(mvn.config.lambda == 1.0);
  CHECK(default_manifest(ExperimentId::mvn, "cgan").config.lambda == 0.0);
  const auto sweep = default_manifest(ExperimentId::mvn_sweep, "gr", 13);
  CHECK(sweep.dataset.k == 15);
  CHECK(sweep.generator.input_dim == 15);
  CHECK(sweep.output_dir.find("p13") != std::string::npos);
  CHECK_THROWS(default_manifest(ExperimentId::mvn, "gr-exact"));
  CHECK_THROWS(experiment_from_string("circle"));
}

TEST_CASE("iteration scaling rounds and keeps at least one iteration") {
  auto m = default_manifest(ExperimentId::mvn, "gr");
  scale_iterations(m, 0.4);
  CHECK(m.config.iterations == 20000);
  scale_iterations(m, 1e-9);
  CHECK(m.config.iterations >= 1);
  CHECK_THROWS(scale_iterations(m, 0.0));
}

TEST_CASE("manifest hash is stable and content sensitive") {
  const nlohmann::json a = default_manifest(ExperimentId::circular_full, "gr-exact");
  auto b = a;
  CHECK(manifest_hash(a) == manifest_hash(b));
  CHECK(manifest_hash(a).size() == 16);
  b["config"]["lambda"] = 0.03;
  CHECK(manifest_hash(a) != manifest_hash(b));
}

TEST_CASE("repetition seeds are deterministic and distinct") {
  const auto s = repetition_seeds(1, 5);
  CHECK(s == repetition_seeds(1, 5));
  CHECK(s != repetition_seeds(2, 5));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) CHECK(s[i] != s[j]);
  }
}

TEST_CASE("gen-data writes the documented datasets") {
  const fs::path dir = scratch("gen_data");
  {
    auto m = tiny(ExperimentId::circular_full, "gr-exact", dir / "full");
    std::ostringstream log;
    cmd_gen_data(m, log);
    const auto ds = data::read_dataset_csv(repetition_dir(m, 0) / "data.csv", 1);
    CHECK(ds.size() == 1200);
    CHECK(fs::exists(repetition_dir(m, 0) / "data_manifest.json"));
  }
  {
    auto m = tiny(ExperimentId::circular_partial, "gr-exact", dir / "partial");
    std::ostringstream log;
    cmd_gen_data(m, log);
    const auto ds = data::read_dataset_csv(repetition_dir(m, 1) / "data.csv", 1);
    CHECK(ds.size() == 1200);
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
      for (const auto& gap : m.dataset.circular.gaps) CHECK_FALSE(gap.contains(ds.conditions(i, 0)));
    }
  }
  {
    auto m = default_manifest(ExperimentId::mvn, "gr");
    m.output_dir = (dir / "mvn").string();
    std::ostringstream log;
    cmd_gen_data(m, log);
    const auto ds = data::read_dataset_csv(repetition_dir(m, 0) / "data.csv", 8);
    CHECK(ds.size() == 1000);
    CHECK(ds.outputs.cols() == 2);
    CHECK(slurp(repetition_dir(m, 0) / "data.csv").rfind("x_1,x_2,x_3,x_4,x_5,x_6,x_7,x_8,y_1,y_2\n", 0) == 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("train then eval on a circular manifest writes every artifact and resumes") {
  const fs::path dir = scratch("train_eval");
  const auto m = tiny(ExperimentId::circular_full, "gr-exact", dir);
  std::ostringstream log;
  const auto first = cmd_train(m, log);
  CHECK(first.trained == 2);
  for (std::size_t rep = 0; rep < 2; ++rep) {
    const fs::path r = repetition_dir(m, rep);
    CHECK(line_count(r / "train_log.csv") == 13);
    CHECK(slurp(r / "train_log.csv").rfind("iter,d_loss,g_adv,g_reg,wall_ms\n", 0) == 0);
    CHECK(fs::exists(r / "generator.ckpt"));
    CHECK(fs::exists(r / "discriminator.ckpt"));
  }
  const std::string ckpt = slurp(repetition_dir(m, 0) / "generator.ckpt");
  const auto second = cmd_train(m, log);
  CHECK(second.reused == 2);
  CHECK(second.trained == 0);
  CHECK(slurp(repetition_dir(m, 0) / "generator.ckpt") == ckpt);

  const auto results = cmd_eval(m, log);
  REQUIRE(results.size() == 2);
  const fs::path r0 = repetition_dir(m, 0);
  CHECK(line_count(r0 / "report.csv") == 1 + 12 + 1);
  CHECK(line_count(r0 / "samples.csv") == 1 + 12 * 20);
  CHECK(fs::exists(r0 / "overlays.csv"));
  CHECK(fs::exists(fs::path(m.output_dir) / "summary.csv"));
  const auto report_manifest = nlohmann::json::parse(slurp(fs::path(m.output_dir) / "report_manifest.json"));
  CHECK(report_manifest.at("repetitions") == 2);
  CHECK(report_manifest.at("config_hash").get<std::string>().size() == 16);
  fs::remove_all(dir);
}

TEST_CASE("a changed manifest retrains instead of reusing") {
  const fs::path dir = scratch("retrain");
  auto m = tiny(ExperimentId::circular_full, "gr-exact", dir);
  m.seeds = {3};
  std::ostringstream log;
  cmd_train(m, log);
  m.config.lambda = 0.05;
  CHECK(cmd_train(m, log).trained == 1);
  fs::remove_all(dir);
}

TEST_CASE("mvn eval writes diagnostics and panel samples") {
  const fs::path dir = scratch("mvn_eval");
  const auto m = tiny(ExperimentId::mvn, "gr", dir);
  std::ostringstream log;
  cmd_train(m, log);
  const auto results = cmd_eval(m, log);
  REQUIRE(results.size() == 2);
  CHECK(results[0].mean_w2_floor.has_value());
  const fs::path r0 = repetition_dir(m, 0);
  CHECK(line_count(r0 / "diagnostics.csv") == 1 + 12);
  CHECK(slurp(r0 / "panel_samples.csv").rfind("panel,offset,source,y_1,y_2\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("rerunning a manifest reproduces every CSV byte for byte") {
  const fs::path a = scratch("determinism_a"), b = scratch("determinism_b");
  for (const auto& root : {a, b}) {
    auto m = tiny(ExperimentId::circular_partial, "gr-ratio", root);
    std::ostringstream log;
    cmd_train(m, log);
    cmd_eval(m, log);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path twin = b / fs::relative(entry.path(), a);
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
    ++compared;
  }
  CHECK(compared >= 9);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("reproduce aggregates equal the per-repetition summaries") {
  const fs::path dir = scratch("reproduce");
  ReproduceOptions options;
  options.out_dir = dir;
  options.reps = 2;
  options.scale = 0.002;
  options.variants = {"gr-exact", "degenerate"};
  std::ostringstream log;
  const auto result = cmd_reproduce(ExperimentId::circular_partial, options, log);
  CHECK(fs::exists(result.aggregate_csv));
  CHECK(slurp(result.aggregate_csv).rfind("experiment,variant,p,rep,hq_pct,recovered_pct,mean_w2\n", 0) == 0);
  REQUIRE(result.rows.size() == 2 * 3);
  for (std::size_t v = 0; v < 2; ++v) {
    const auto& r0 = result.rows[3 * v];
    const auto& r1 = result.rows[3 * v + 1];
    const auto& mean = result.rows[3 * v + 2];
    CHECK(mean.rep == "mean");
    CHECK(mean.mean_w2 == doctest::Approx(0.5 * (r0.mean_w2 + r1.mean_w2)));
    CHECK(mean.hq_pct == doctest::Approx(0.5 * (r0.hq_pct + r1.hq_pct)));
  }
  fs::remove_all(dir);
}

TEST_CASE("threshold checks flag each documented miss") {
  ReproduceResult good;
  good.rows = {{"circular-full", "gr-exact", 1, "mean", 95.0, 100.0, 0.04}};
  CHECK(check_thresholds(ExperimentId::circular_full, good).empty());
  ReproduceResult bad = good;
  bad.rows[0].mean_w2 = 0.06;
  CHECK(check_thresholds(ExperimentId::circular_full, bad).size() == 1);
  bad.rows[0].hq_pct = 80.0;
  CHECK(check_thresholds(ExperimentId::circular_full, bad).size() == 2);

  ReproduceResult mvn;
  mvn.rows = {{"mvn", "cgan", 8, "mean", 0, 0, 0.30}, {"mvn", "gr", 8, "mean", 0, 0, 0.20}};
  CHECK(check_thresholds(ExperimentId::mvn, mvn).empty());
  mvn.rows[1].mean_w2 = 0.30;
  CHECK_FALSE(check_thresholds(ExperimentId::mvn, mvn).empty());
}

TEST_CASE("the gradient suite passes on the real ops") {
  const auto results = run_gradient_suite();
  CHECK(results.size() >= 20);
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.passed);
  }
  std::ostringstream out;
  CHECK(print_gradient_report(out, results));
}

TEST_CASE("the gradient suite catches a corrupted dense backward") {
  GradientSuiteOptions options;
  options.linear = [](const nn::Tensor& x, const nn::Tensor& w, const nn::Tensor& b) {
    nn::Matrix out = x.value() * w.value();
    out.rowwise() += b.value().row(0);
    // Correct forward value; the weight gradient comes back doubled.
    return nn::Tensor::from_op(std::move(out), {x, w, b}, [x, w, b](const nn::Matrix& g) {
      if (x.requires_grad()) x.accumulate_grad(g * w.value().transpose());
      if (w.requires_grad()) w.accumulate_grad(2.0 * x.value().transpose() * g);
      if (b.requires_grad()) b.accumulate_grad(g.colwise().sum());
    });
  };
  const auto results = run_gradient_suite(options);
  bool any_failed = false;
  for (const auto& r : results) any_failed = any_failed || !r.passed;
  CHECK(any_failed);
  std::ostringstream out;
  CHECK_FALSE(print_gradient_report(out, results));
  CHECK(out.str().find("FAIL") != std::string::npos);
}
