#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noisy/ground_truth.hpp"

namespace noisy {

enum class DatasetFormat { PointsCsv, Matrix, ValuesCsv };

inline DatasetFormat parse_format(const std::string& s) {
  if (s == "points-csv") return DatasetFormat::PointsCsv;
  if (s == "matrix") return DatasetFormat::Matrix;
  if (s == "values-csv") return DatasetFormat::ValuesCsv;
  throw ValidationError("unknown dataset format '" + s + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ValidationError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

/// points-csv: header `x0,x1,...[,label]`, one row per point.
inline GroundTruth read_points_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "points-csv: missing header");
  const auto header = detail::split_csv(detail::trim(line));
  require(!header.empty(), "points-csv: empty header");
  const bool has_label = header.back() == "label";
  const std::size_t dim = header.size() - (has_label ? 1 : 0);
  require(dim > 0, "points-csv: no coordinate columns");
  for (std::size_t k = 0; k < dim; ++k)
    require(header[k] == "x" + std::to_string(k), "points-csv: expected column x" + std::to_string(k));

  std::vector<double> coords;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    require(cells.size() == header.size(),
            "points-csv line " + std::to_string(line_no) + ": wrong column count");
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(detail::parse_real(cells[k], line_no));
    if (has_label) {
      const double lab = detail::parse_real(cells.back(), line_no);
      require(lab == static_cast<int>(lab), "points-csv: labels must be integers");
      labels.push_back(static_cast<int>(lab));
    }
  }
  require(!coords.empty(), "points-csv: no rows");
  std::optional<std::vector<int>> lab;
  if (has_label) lab = std::move(labels);
  return GroundTruth::from_points(std::move(coords), dim, std::move(lab));
}

/// matrix: first token n, then n rows of n whitespace-separated reals.
inline GroundTruth read_matrix(std::istream& in) {
  long long n = 0;
  require(static_cast<bool>(in >> n) && n > 0, "matrix: first line must be a positive n");
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> d(size * size);
  for (std::size_t i = 0; i < size * size; ++i) {
    std::string tok;
    require(static_cast<bool>(in >> tok), "matrix: expected " + std::to_string(size * size) + " entries");
    d[i] = detail::parse_real(tok, 2 + i / size);
  }
  std::string extra;
  require(!(in >> extra), "matrix: trailing data after n rows");
  return GroundTruth::from_matrix(std::move(d), size);
}

/// values-csv: header `value`, one real per row.
inline GroundTruth read_values_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "values-csv: missing header");
  require(detail::trim(line) == "value", "values-csv: header must be 'value'");
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    values.push_back(detail::parse_real(line, line_no));
  }
  require(!values.empty(), "values-csv: no rows");
  return GroundTruth::from_values(std::move(values));
}

inline GroundTruth read_dataset(std::istream& in, DatasetFormat fmt) {
  switch (fmt) {
    case DatasetFormat::PointsCsv: return read_points_csv(in);
    case DatasetFormat::Matrix: return read_matrix(in);
    case DatasetFormat::ValuesCsv: return read_values_csv(in);
  }
  throw ValidationError("unreachable dataset format");
}

inline GroundTruth load_dataset(const std::string& path, DatasetFormat fmt) {
  std::ifstream in(path);
  require(in.good(), "cannot open dataset '" + path + "'");
  return read_dataset(in, fmt);
}

inline void write_points_csv(std::ostream& out, const GroundTruth& g) {
  require(g.mode() == GroundTruth::Mode::Points, "write_points_csv: not a point set");
  for (std::size_t k = 0; k < g.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  if (g.labels()) out << ",label";
  out << '\n';
  out.precision(17);
  for (ItemId i = 0; i < g.size(); ++i) {
    for (std::size_t k = 0; k < g.dim(); ++k) out << (k ? "," : "") << g.coord(i, k);
    if (g.labels()) out << ',' << (*g.labels())[i];
    out << '\n';
  }
}

}  // namespace noisy
