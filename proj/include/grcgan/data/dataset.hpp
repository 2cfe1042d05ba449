#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "grcgan/random.hpp"

namespace grcgan::data {

using Matrix = RowMatrix;

/// Paired conditions and outputs, one row per observation.
struct LabeledDataset {
  Matrix conditions;  // N x p
  Matrix outputs;     // N x q
  nlohmann::json provenance;  // generating spec and seed

  Eigen::Index size() const { return conditions.rows(); }
  void validate() const;
};

/// CSV with header x_1..x_p,y_1..y_q and round-trip precision.
void write_dataset_csv(std::ostream& out, const LabeledDataset& data);
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data);
LabeledDataset read_dataset_csv(const std::filesystem::path& path, Eigen::Index condition_dim);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace grcgan::data
