#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grcgan/data/dataset.hpp"
#include "grcgan/eval/evaluate.hpp"
#include "grcgan/experiment/manifest.hpp"
#include "grcgan/nn/network.hpp"

namespace grcgan::experiment {

namespace fs = std::filesystem;

/// Per-repetition output directory: <output_dir>/rep<r>.
fs::path repetition_dir(const RunManifest& m, std::size_t rep);

/// Deterministic dataset of one repetition.
data::LabeledDataset make_dataset(const RunManifest& m, std::size_t rep);
/// The MVN law behind an MVN manifest.
data::MvnSpec mvn_spec(const RunManifest& m);
/// Seed handed to the evaluation of one repetition.
std::uint64_t evaluation_seed(const RunManifest& m, std::size_t rep);

/// Writes data.csv and data_manifest.json into every repetition directory.
void cmd_gen_data(const RunManifest& m, std::ostream& log);

struct TrainSummary {
  std::size_t trained = 0;  // repetitions actually trained
  std::size_t reused = 0;   // repetitions whose finished checkpoint matched
};

/// Trains every repetition, writing train_log.csv (flushed per row),
/// generator.ckpt and discriminator.ckpt. A repetition whose directory holds
/// a finished run of the identical manifest and seed is left untouched.
/// Divergence keeps the partial log and rethrows.
TrainSummary cmd_train(const RunManifest& m, std::ostream& log);

struct RepetitionResult {
  std::uint64_t seed = 0;
  eval::ExperimentReport report;
  std::optional<double> mean_w2_exact;  // MVN only
  std::optional<double> mean_w2_floor;  // MVN only
};

/// Loads each repetition's generator and writes report.csv plus plot data
/// (samples.csv and overlays.csv for circular runs, diagnostics.csv and
/// panel_samples.csv for MVN runs), then summary.csv and
/// report_manifest.json in the output directory.
std::vector<RepetitionResult> cmd_eval(const RunManifest& m, std::ostream& log);

/// One row of an aggregate table.
struct AggregateRow {
  std::string experiment;
  std::string variant;
  std::size_t p = 0;
  std::string rep;  // repetition index, or "mean"
  double hq_pct = 0.0;
  double recovered_pct = 0.0;
  double mean_w2 = 0.0;
};

struct ReproduceOptions {
  fs::path out_dir = "runs";
  std::uint64_t base_seed = 1;
  std::size_t reps = 3;
  double scale = 1.0;
  std::vector<std::size_t> sweep_dims = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  /// Restricts the variants trained, empty means all.
  std::vector<std::string> variants;
};

struct ReproduceResult {
  std::vector<AggregateRow> rows;
  std::vector<std::string> failures;  // acceptance misses, filled by check_thresholds
  fs::path aggregate_csv;
};

/// Generates, trains, evaluates and aggregates every variant of an
/// experiment. Writes <out_dir>/<experiment>/aggregate.csv.
ReproduceResult cmd_reproduce(ExperimentId id, const ReproduceOptions& options, std::ostream& log);

/// Compares a reproduction against the published targets. Returns the
/// failed checks; empty means all met.
std::vector<std::string> check_thresholds(ExperimentId id, const ReproduceResult& result);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Manifest used by reproduce for one variant (and dimension, for the sweep).
RunManifest reproduce_manifest(ExperimentId id, const std::string& variant, std::size_t p,
                               const ReproduceOptions& options);

}  // namespace grcgan::experiment
