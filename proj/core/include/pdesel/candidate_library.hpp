#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdesel {

/// The regression problem of PDE discovery: a design matrix whose columns are
/// evaluated candidate terms, and the time-derivative samples they should
/// explain. Rows are samples, columns are terms.
///
/// Invariants enforced by validate():
///   - rows >= cols >= 1 and target.size() == rows,
///   - no column is identically zero,
///   - column names are unique and non-empty.
struct CandidateLibrary {
  Eigen::MatrixXd matrix;                 // N x m candidate terms
  std::vector<std::string> column_names;  // m names, unique
  Eigen::VectorXd target;                 // N samples of u_t

  CandidateLibrary() = default;
  CandidateLibrary(Eigen::MatrixXd m, std::vector<std::string> names, Eigen::VectorXd y);

  Eigen::Index n_samples() const { return matrix.rows(); }
  Eigen::Index n_terms() const { return matrix.cols(); }

  /// Index of a named column; throws InvalidArgument if absent.
  int column_index(const std::string& name) const;

  /// Throws InvalidArgument when any structural invariant is violated.
  void validate() const;
};

/// CSV layout: header row of column names with a final `__target__` column,
/// then one data row per sample, every value with 17 significant digits so a
/// round trip reproduces doubles exactly.
void write_library_csv(const CandidateLibrary& lib, std::ostream& out);
void write_library_csv(const CandidateLibrary& lib, const std::string& path);
CandidateLibrary read_library_csv(std::istream& in);
CandidateLibrary read_library_csv(const std::string& path);

/// Shortest decimal rendering of x with at least 17 significant digits
/// ("%.17g"); shared by every CSV writer so outputs stay byte-reproducible.
std::string format_full(double x);

}  // namespace pdesel
