#include "clsm/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clsm/common.hpp"

namespace clsm {

std::vector<double> ScalingParams::apply(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / std[j];
  return out;
}

std::vector<double> ScalingParams::invert(const std::vector<double>& z) const {
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = mean[j] + std[j] * z[j];
  return out;
}

Matrix Dataset::inputs_matrix() const {
  Matrix m(size(), n_vars());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < n_vars(); ++j) m(i, j) = observations[i].x[j];
  return m;
}

std::vector<double> Dataset::targets() const {
  std::vector<double> y(size());
  for (std::size_t i = 0; i < size(); ++i) y[i] = observations[i].y;
  return y;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row_number) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParseError("row " + std::to_string(row_number) + ": non-numeric cell '" +
                     cell + "'");
  if (!std::isfinite(value))
    throw ParseError("row " + std::to_string(row_number) + ": non-finite value");
  return value;
}

void format_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Dataset subset_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.observations.reserve(rows.size());
  for (std::size_t r : rows) out.observations.push_back(d.observations.at(r));
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw ParseError("bad header, expected x1,...,xn,y: " + path);
  for (std::size_t j = 0; j + 1 < header.size(); ++j) {
    if (header[j] != "x" + std::to_string(j + 1))
      throw ParseError("bad header column " + std::to_string(j + 1) +
                       ", expected x" + std::to_string(j + 1));
  }
  const std::size_t n_cols = header.size();

  Dataset d;
  std::size_t row_number = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != n_cols)
      throw ParseError("row " + std::to_string(row_number) + ": expected " +
                       std::to_string(n_cols) + " columns, got " +
                       std::to_string(cells.size()));
    Observation obs;
    obs.x.resize(n_cols - 1);
    for (std::size_t j = 0; j + 1 < n_cols; ++j) obs.x[j] = parse_cell(cells[j], row_number);
    obs.y = parse_cell(cells.back(), row_number);
    d.observations.push_back(std::move(obs));
  }
  if (d.observations.empty()) throw ParseError("empty dataset: " + path);
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  std::string buf;
  for (std::size_t j = 0; j < d.n_vars(); ++j) buf += "x" + std::to_string(j + 1) + ",";
  buf += "y\n";
  for (const auto& obs : d.observations) {
    for (double v : obs.x) {
      format_double(buf, v);
      buf += ',';
    }
    format_double(buf, obs.y);
    buf += '\n';
  }
  out << buf;
}

std::pair<Dataset, ScalingParams> standardize(const Dataset& d) {
  const std::size_t s = d.size();
  const std::size_t n = d.n_vars();
  if (s == 0) throw ConfigError("standardize: empty dataset");

  ScalingParams params;
  params.mean.assign(n, 0.0);
  params.std.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (const auto& obs : d.observations) sum += obs.x[j];
    const double mean = sum / static_cast<double>(s);
    double ss = 0.0;
    for (const auto& obs : d.observations) {
      const double dx = obs.x[j] - mean;
      ss += dx * dx;
    }
    const double var = ss / static_cast<double>(s);  // population variance
    params.mean[j] = mean;
    params.std[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return {apply_scaling(d, params), params};
}

Dataset apply_scaling(const Dataset& d, const ScalingParams& params) {
  if (params.mean.size() != d.n_vars())
    throw ConfigError("apply_scaling: dimension mismatch");
  Dataset out;
  out.observations.reserve(d.size());
  for (const auto& obs : d.observations)
    out.observations.push_back({params.apply(obs.x), obs.y});
  out.scaling = params;
  return out;
}

void write_matrix_csv(const Matrix& m, const std::vector<std::string>& header,
                      const std::string& path) {
  if (!header.empty() && header.size() != m.cols)
    throw ConfigError("write_matrix_csv: header width mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  std::string buf;
  for (std::size_t j = 0; j < header.size(); ++j) {
    buf += header[j];
    buf += (j + 1 < header.size()) ? ',' : '\n';
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      format_double(buf, m(i, j));
      buf += (j + 1 < m.cols) ? ',' : '\n';
    }
  }
  out << buf;
}

}  // namespace clsm
