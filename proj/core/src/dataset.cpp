// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "msboost/errors.hpp"

namespace msboost {

void Dataset::validate() const {
  if (y.size() < 2) {
    throw InvalidInputError("dataset needs at least 2 observations, got " +
                            std::to_string(y.size()));
  }
  if (X.rows() != y.size()) {
    throw InvalidInputError("covariate rows (" + std::to_string(X.rows()) +
                            ") do not match response length (" + std::to_string(y.size()) + ")");
  }
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (!std::isfinite(y(t))) {
      throw InvalidInputError("non-finite response at row " + std::to_string(t + 1));
    }
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (!std::isfinite(X(t, j))) {
        throw InvalidInputError("non-finite covariate at row " + std::to_string(t + 1) +
                                ", column " + std::to_string(j + 2));
      }
    }
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, size_t row, size_t col) {
  // trim whitespace and a possible trailing \r
  size_t b = cell.find_first_not_of(" \t\r");
  size_t e = cell.find_last_not_of(" \t\r");
  if (b == std::string::npos) {
    throw InvalidInputError("blank cell at row " + std::to_string(row) + ", column " +
                            std::to_string(col));
  }
  const std::string s = cell.substr(b, e - b + 1);
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size()) {
    throw InvalidInputError("non-numeric cell '" + s + "' at row " + std::to_string(row) +
                            ", column " + std::to_string(col));
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("'" + path + "' is empty");
  auto header = split_csv_line(line);
  if (header.size() < 2) {
    throw InvalidInputError("'" + path + "' needs a response column and at least one covariate");
  }
  const size_t n_cols = header.size();

  std::vector<std::vector<double>> rows;
  size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != n_cols) {
      throw InvalidInputError("row " + std::to_string(row_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(n_cols));
    }
    std::vector<double> vals(n_cols);
    for (size_t c = 0; c < n_cols; ++c) vals[c] = parse_cell(cells[c], row_no, c + 1);
    rows.push_back(std::move(vals));
  }
  if (rows.size() < 2) {
    throw InvalidInputError("'" + path + "' has " + std::to_string(rows.size()) +
                            " data rows, need at least 2");
  }

  Dataset d;
  const auto T = static_cast<Eigen::Index>(rows.size());
  const auto P = static_cast<Eigen::Index>(n_cols - 1);
  d.y.resize(T);
  d.X.resize(T, P);
  for (Eigen::Index t = 0; t < T; ++t) {
    d.y(t) = rows[static_cast<size_t>(t)][0];
    for (Eigen::Index j = 0; j < P; ++j) {
      d.X(t, j) = rows[static_cast<size_t>(t)][static_cast<size_t>(j) + 1];
    }
  }
  d.covariate_names.assign(header.begin() + 1, header.end());
  for (auto& name : d.covariate_names) {
    while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
  }
  d.validate();
  return d;
}

}  // namespace msboost
