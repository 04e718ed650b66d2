#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "subsel/dataset.hpp"
#include "subsel/errors.hpp"

namespace subsel {

struct CsvLoadSummary {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool had_header = false;
  std::vector<std::string> names;
};

struct LoadedDataset {
  Dataset dataset;
  CsvLoadSummary features;
  std::optional<CsvLoadSummary> response;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

inline bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

struct ParsedCsv {
  std::vector<std::vector<double>> rows;
  CsvLoadSummary summary;
};

inline ParsedCsv parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  ParsedCsv out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!numeric) {
      if (first_data_row && out.rows.empty() && !out.summary.had_header) {
        // Non-numeric first row: treat as a header.
        out.summary.had_header = true;
        for (const auto cell : cells) out.summary.names.emplace_back(cell);
        width = cells.size();
        continue;
      }
      throw DataError(path + ": non-numeric cell at row " +
                      std::to_string(lineno) + ", column " +
                      std::to_string(bad_col + 1));
    }
    if (out.rows.empty() && !out.summary.had_header) width = cells.size();
    if (cells.size() != width) {
      throw DataError(path + ": row " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(width));
    }
    first_data_row = false;
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) throw DataError(path + ": no data rows");
  out.summary.rows = out.rows.size();
  out.summary.cols = width;
  return out;
}

inline void write_double(std::string& buf, double v) {
  char tmp[32];
  const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  buf.append(tmp, ptr);
}

}  // namespace detail

/// Loads a dataset from a features CSV (one observation per row) and an
/// optional single-column response CSV. Headers are detected by a
/// non-numeric first row. Without a response file the response is zero,
/// which suits objectives that ignore it.
inline LoadedDataset load_csv(const std::string& features_path,
                              const std::optional<std::string>& response_path) {
  detail::ParsedCsv feats = detail::parse_csv_file(features_path);
  LoadedDataset out;
  const std::size_t d = feats.summary.rows;
  const std::size_t n = feats.summary.cols;
  out.dataset.features.resize(static_cast<Eigen::Index>(d),
                              static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.dataset.features(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j)) = feats.rows[i][j];
    }
  }
  out.dataset.column_names = feats.summary.names;
  out.features = std::move(feats.summary);

  out.dataset.response = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  if (response_path) {
    detail::ParsedCsv resp = detail::parse_csv_file(*response_path);
    if (resp.summary.cols != 1) {
      throw DataError(*response_path + ": response file must have 1 column, got " +
                      std::to_string(resp.summary.cols));
    }
    if (resp.summary.rows != d) {
      throw DataError("response length " + std::to_string(resp.summary.rows) +
                      " does not match feature row count " + std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
      out.dataset.response[static_cast<Eigen::Index>(i)] = resp.rows[i][0];
    }
    out.response = std::move(resp.summary);
  }
  out.dataset.validate();
  return out;
}

/// Writes the dataset as CSV. Doubles are printed with shortest round-trip
/// formatting, so a write-then-load cycle reproduces values bit-exactly.
inline void save_csv(const Dataset& data, const std::string& features_path,
                     const std::optional<std::string>& response_path) {
  data.validate();
  {
    std::string buf;
    if (!data.column_names.empty()) {
      for (std::size_t j = 0; j < data.column_names.size(); ++j) {
        if (j > 0) buf += ',';
        buf += data.column_names[j];
      }
      buf += '\n';
    }
    for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
      for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
        if (j > 0) buf += ',';
        detail::write_double(buf, data.features(i, j));
      }
      buf += '\n';
    }
    std::ofstream out(features_path);
    if (!out) throw DataError("cannot write '" + features_path + "'");
    out << buf;
  }
  if (response_path) {
    std::string buf;
    for (Eigen::Index i = 0; i < data.response.size(); ++i) {
      detail::write_double(buf, data.response[i]);
      buf += '\n';
    }
    std::ofstream out(*response_path);
    if (!out) throw DataError("cannot write '" + *response_path + "'");
    out << buf;
  }
}

}  // namespace subsel
