#include "pdesel/candidate_library.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pdesel/error.hpp"

namespace pdesel {

namespace {

constexpr const char* kTargetHeader = "__target__";

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, Eigen::Index row, std::size_t col) {
  // strtod rather than stod: stod turns ERANGE into out_of_range even for
  // subnormal underflow, where strtod still returns the correctly rounded
  // value. Cells near DBL_MIN must survive the write/read round trip; only
  // incomplete parses and non-finite results are malformed.
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || static_cast<std::size_t>(end - begin) != cell.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::IoError, "malformed numeric cell '" + cell + "' at data row " +
                                        std::to_string(row) + ", column " + std::to_string(col));
  }
  return value;
}

}  // namespace

CandidateLibrary::CandidateLibrary(Eigen::MatrixXd m, std::vector<std::string> names,
                                   Eigen::VectorXd y)
    : matrix(std::move(m)), column_names(std::move(names)), target(std::move(y)) {
  validate();
}

int CandidateLibrary::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < column_names.size(); ++j) {
    if (column_names[j] == name) return static_cast<int>(j);
  }
  throw Error(ErrorCode::InvalidArgument, "no library column named '" + name + "'");
}

void CandidateLibrary::validate() const {
  const Eigen::Index n = matrix.rows();
  const Eigen::Index m = matrix.cols();
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "library needs at least one column");
  if (n < m) {
    throw Error(ErrorCode::InvalidArgument,
                "library needs at least as many samples as terms (" + std::to_string(n) + " < " +
                    std::to_string(m) + ")");
  }
  if (target.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "target length " + std::to_string(target.size()) +
                                               " does not match row count " + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(column_names.size()) != m) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(m) + " column names, got " +
                                               std::to_string(column_names.size()));
  }
  if (!matrix.allFinite() || !target.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "library contains non-finite values");
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (matrix.col(j).cwiseAbs().maxCoeff() == 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "column '" + column_names[static_cast<std::size_t>(j)] + "' is identically zero");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : column_names) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "empty column name");
    if (name == kTargetHeader) {
      throw Error(ErrorCode::InvalidArgument, "column name collides with the target header");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate column name '" + name + "'");
    }
  }
}

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_library_csv(const CandidateLibrary& lib, std::ostream& out) {
  for (const auto& name : lib.column_names) out << name << ',';
  out << kTargetHeader << '\n';
  for (Eigen::Index i = 0; i < lib.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < lib.matrix.cols(); ++j) {
      out << format_full(lib.matrix(i, j)) << ',';
    }
    out << format_full(lib.target(i)) << '\n';
  }
}

void write_library_csv(const CandidateLibrary& lib, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_library_csv(lib, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

CandidateLibrary read_library_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty library CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_row(line);
  if (header.size() < 2 || header.back() != kTargetHeader) {
    throw Error(ErrorCode::IoError,
                std::string("library CSV header must end with ") + kTargetHeader);
  }
  const std::size_t m = header.size() - 1;
  std::vector<std::string> names(header.begin(), header.end() - 1);

  std::vector<double> values;
  Eigen::Index n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_row(line);
    if (cells.size() != m + 1) {
      throw Error(ErrorCode::IoError, "data row " + std::to_string(n) + " has " +
                                          std::to_string(cells.size()) + " cells, expected " +
                                          std::to_string(m + 1));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) values.push_back(parse_double(cells[j], n, j));
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::IoError, "library CSV has no data rows");

  Eigen::MatrixXd mat(n, static_cast<Eigen::Index>(m));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      mat(i, static_cast<Eigen::Index>(j)) = values[static_cast<std::size_t>(i) * (m + 1) + j];
    }
    y(i) = values[static_cast<std::size_t>(i) * (m + 1) + m];
  }
  return CandidateLibrary(std::move(mat), std::move(names), std::move(y));
}

CandidateLibrary read_library_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open library CSV '" + path + "'");
  return read_library_csv(in);
}

}  // namespace pdesel
