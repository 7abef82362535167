#include "tvopt/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tvopt {

namespace {

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::istringstream ss(line);
  std::string token;
  while (ss >> token) {
    if (token.front() == '#') return !row.empty();
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      return false;
    }
    if (used != token.size()) return false;
    row.push_back(v);
  }
  return !row.empty();
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content = true;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    if (!parse_row(line, row)) {
      if (first_content) {
        first_content = false;  // header line
        continue;
      }
      throw std::runtime_error("unparsable row in '" + path + "': " + line);
    }
    first_content = false;
    rows.push_back(row);
  }
  if (rows.empty()) throw std::runtime_error("no data rows in '" + path + "'");
  const size_t cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::runtime_error("ragged rows in '" + path + "'");
  }
  return rows;
}

}  // namespace

SamplesFile read_samples_file(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.front().size() < 2) {
    throw std::runtime_error("'" + path + "' needs a time column plus at least one value column");
  }
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(rows.front().size()) - 1;
  if (n < 2) throw std::runtime_error("'" + path + "' needs at least two rows to infer cell width");
  const double dt = rows[1][0] - rows[0][0];
  if (!(dt > 0.0)) throw std::runtime_error("time column in '" + path + "' must increase");
  for (int j = 0; j < n; ++j) {
    const double expected = rows[0][0] + j * dt;
    if (std::abs(rows[j][0] - expected) > 1e-9 * (std::abs(expected) + dt)) {
      throw std::runtime_error("time column in '" + path + "' is not uniformly spaced");
    }
  }
  SamplesFile out;
  out.horizon = n * dt;
  out.values = RowMatrix(n, m);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) out.values(j, k) = rows[j][k + 1];
  }
  return out;
}

ControlGrid read_control_file(const std::string& path, AlphabetPtr alphabet,
                              std::optional<double> horizon) {
  const SamplesFile file = read_samples_file(path);
  const int n = file.values.rows();
  if (file.values.cols() != alphabet->dim()) {
    throw std::runtime_error("control file '" + path + "' has wrong component count");
  }
  std::vector<int> indices(n);
  std::vector<int> value(alphabet->dim());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < alphabet->dim(); ++k) {
      const double v = file.values(j, k);
      const int vi = static_cast<int>(std::llround(v));
      if (std::abs(v - vi) > 1e-9) {
        throw std::runtime_error("non-integer control value in '" + path + "'");
      }
      value[k] = vi;
    }
    const auto idx = alphabet->find(value);
    if (!idx) throw std::runtime_error("control value outside the alphabet in '" + path + "'");
    indices[j] = *idx;
  }
  return ControlGrid(std::move(alphabet), horizon.value_or(file.horizon), std::move(indices));
}

void write_control_file(const std::string& path, const ControlGrid& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "t";
  for (int m = 0; m < u.alphabet().dim(); ++m) out << " u" << (m + 1);
  out << "\n" << std::setprecision(17);
  for (int j = 0; j < u.cells(); ++j) {
    out << j * u.dt();
    for (int v : u.alphabet().value(u.index(j))) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

AlphabetPtr read_alphabet_file(const std::string& path) {
  const auto rows = read_rows(path);
  std::vector<std::vector<int>> values;
  for (const auto& row : rows) {
    std::vector<int> v(row.size());
    for (size_t k = 0; k < row.size(); ++k) {
      const int vi = static_cast<int>(std::llround(row[k]));
      if (std::abs(row[k] - vi) > 1e-9) {
        throw std::runtime_error("non-integer alphabet value in '" + path + "'");
      }
      v[k] = vi;
    }
    values.push_back(std::move(v));
  }
  return std::make_shared<AdmissibleSet>(std::move(values));
}

void write_column_file(const std::string& path, const std::string& header,
                       const std::vector<double>& first, const std::vector<double>& second) {
  if (first.size() != second.size()) {
    throw std::invalid_argument("column file needs columns of equal length");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << header << "\n" << std::setprecision(17);
  for (size_t i = 0; i < first.size(); ++i) out << first[i] << ' ' << second[i] << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace tvopt
