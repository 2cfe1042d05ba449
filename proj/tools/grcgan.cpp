#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "grcgan/experiment/gradient_suite.hpp"
#include "grcgan/experiment/manifest.hpp"
#include "grcgan/experiment/runner.hpp"

namespace {

using namespace grcgan::experiment;

constexpr int kExitError = 1;
constexpr int kExitThresholdMiss = 2;

/// Options shared by gen-data, train and eval.
struct RunArgs {
  std::string config;
  std::string experiment;
  std::string variant;
  std::size_t p = 8;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<double> scale;
  std::string out;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "Run manifest (JSON)");
  cmd->add_option("experiment", a.experiment, "circular-full | circular-partial | mvn | mvn-sweep")
      ->check(CLI::IsMember({"circular-full", "circular-partial", "mvn", "mvn-sweep"}));
  cmd->add_option("--variant", a.variant, "Model variant of the preset manifest");
  cmd->add_option("--p", a.p, "Condition dimension for mvn-sweep presets");
  cmd->add_option("--seed", a.seed, "Base seed; repetition r uses seed + r");
  cmd->add_option("--reps", a.reps, "Number of repetitions");
  cmd->add_option("--scale", a.scale, "Multiply the iteration budget by this fraction");
  cmd->add_option("--out", a.out, "Output directory");
}

RunManifest resolve_manifest(const RunArgs& a) {
  RunManifest m;
  if (!a.config.empty()) {
    m = load_manifest(a.config);
  } else if (!a.experiment.empty()) {
    const auto id = experiment_from_string(a.experiment);
    const bool circular = id == ExperimentId::circular_full || id == ExperimentId::circular_partial;
    const std::string fallback = circular ? "gr-exact" : "gr";
    m = default_manifest(id, a.variant.empty() ? fallback : a.variant, a.p);
  } else {
    throw CLI::ValidationError("pass --config PATH or an experiment id");
  }
  if (a.seed || a.reps) {
    const std::uint64_t base = a.seed.value_or(m.seeds.front());
    m.seeds = repetition_seeds(base, a.reps.value_or(m.seeds.size()));
  }
  if (a.scale) scale_iterations(m, *a.scale);
  if (!a.out.empty()) m.output_dir = a.out;
  m.validate();
  return m;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) dims.push_back(std::stoul(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional GANs with a generator Lipschitz penalty: data, training, evaluation, reproduction"};
  app.require_subcommand(1);

  RunArgs gen_args, train_args, eval_args;
  auto* gen = app.add_subcommand("gen-data", "Write the training data of every repetition");
  add_run_options(gen, gen_args);
  auto* train = app.add_subcommand("train", "Train every repetition of a manifest");
  add_run_options(train, train_args);
  auto* evaluate = app.add_subcommand("eval", "Evaluate trained checkpoints and write reports");
  add_run_options(evaluate, eval_args);

  auto* manifest = app.add_subcommand("manifest", "Print a preset manifest as JSON");
  RunArgs manifest_args;
  add_run_options(manifest, manifest_args);

  auto* reproduce = app.add_subcommand("reproduce", "Generate, train, evaluate and aggregate all variants");
  std::string repro_experiment;
  ReproduceOptions repro;
  std::string repro_out = "runs";
  std::string dims_text;
  bool check = false;
  reproduce->add_option("experiment", repro_experiment, "circular-full | circular-partial | mvn | mvn-sweep")
      ->required()
      ->check(CLI::IsMember({"circular-full", "circular-partial", "mvn", "mvn-sweep"}));
  reproduce->add_option("--out", repro_out, "Output root")->capture_default_str();
  reproduce->add_option("--seed", repro.base_seed, "Base seed")->capture_default_str();
  reproduce->add_option("--reps", repro.reps, "Repetitions per variant")->capture_default_str();
  reproduce->add_option("--scale", repro.scale, "Iteration budget fraction")->capture_default_str();
  reproduce->add_option("--dims", dims_text, "Comma-separated condition dimensions for mvn-sweep");
  reproduce->add_option("--variants", repro.variants, "Only these variants")->delimiter(',');
  reproduce->add_flag("--check", check, "Exit with code 2 when a target is missed");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference checks of all gradients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*gen) {
      cmd_gen_data(resolve_manifest(gen_args), std::cout);
    } else if (*train) {
      cmd_train(resolve_manifest(train_args), std::cout);
    } else if (*evaluate) {
      cmd_eval(resolve_manifest(eval_args), std::cout);
    } else if (*manifest) {
      std::cout << nlohmann::json(resolve_manifest(manifest_args)).dump(2) << '\n';
    } else if (*reproduce) {
      const auto id = experiment_from_string(repro_experiment);
      repro.out_dir = repro_out;
      if (!dims_text.empty()) repro.sweep_dims = parse_dims(dims_text);
      const auto result = cmd_reproduce(id, repro, std::cout);
      write_aggregate_csv(std::cout, result.rows);
      if (check) {
        const auto failures = check_thresholds(id, result);
        for (const auto& f : failures) std::cout << "MISS " << f << '\n';
        if (!failures.empty()) return kExitThresholdMiss;
        std::cout << "all targets met\n";
      }
    } else if (*gradcheck) {
      const auto results = run_gradient_suite();
      if (!print_gradient_report(std::cout, results)) return kExitError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
