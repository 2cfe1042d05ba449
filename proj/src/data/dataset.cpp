#include "grcgan/data/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grcgan/error.hpp"

namespace grcgan::data {

void LabeledDataset::validate() const {
  if (conditions.rows() != outputs.rows()) throw ShapeError("dataset row counts differ");
  if (conditions.rows() == 0) throw ConfigError("dataset is empty");
}

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buffer, end);
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& data) {
  data.validate();
  for (Eigen::Index j = 0; j < data.conditions.cols(); ++j) {
    out << (j == 0 ? "" : ",") << "x_" << (j + 1);
  }
  for (Eigen::Index j = 0; j < data.outputs.cols(); ++j) out << ",y_" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.conditions.cols(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(data.conditions(i, j));
    }
    for (Eigen::Index j = 0; j < data.outputs.cols(); ++j) out << ',' << format_double(data.outputs(i, j));
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_dataset_csv(out, data);
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path, Eigen::Index condition_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw ShapeError("ragged dataset CSV");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("dataset CSV has no rows");
  const auto cols = static_cast<Eigen::Index>(rows.front().size());
  if (condition_dim <= 0 || condition_dim >= cols) throw ShapeError("bad condition dimension for CSV");
  LabeledDataset data;
  data.conditions.resize(static_cast<Eigen::Index>(rows.size()), condition_dim);
  data.outputs.resize(static_cast<Eigen::Index>(rows.size()), cols - condition_dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = rows[i][static_cast<std::size_t>(j)];
      if (j < condition_dim) {
        data.conditions(static_cast<Eigen::Index>(i), j) = v;
      } else {
        data.outputs(static_cast<Eigen::Index>(i), j - condition_dim) = v;
      }
    }
  }
  return data;
}

}  // namespace grcgan::data
