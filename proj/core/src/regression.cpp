#include "pdesel/regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "pdesel/error.hpp"

namespace pdesel {

namespace {

constexpr double kRankTolerance = 1e-10;  // relative to the dominant column norm
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<int> normalized_support(const CandidateLibrary& lib, const std::vector<int>& support) {
  if (support.empty()) throw Error(ErrorCode::EmptySupport, "subset fit needs at least one column");
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "support contains duplicate indices");
  }
  if (sorted.front() < 0 || sorted.back() >= lib.n_terms()) {
    throw Error(ErrorCode::InvalidArgument, "support index out of range");
  }
  return sorted;
}

Eigen::MatrixXd design_matrix(const CandidateLibrary& lib, const std::vector<int>& support,
                              bool with_intercept) {
  const Eigen::Index n = lib.n_samples();
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd a(n, k + (with_intercept ? 1 : 0));
  for (Eigen::Index j = 0; j < k; ++j) a.col(j) = lib.matrix.col(support[static_cast<std::size_t>(j)]);
  if (with_intercept) a.col(k).setOnes();
  return a;
}

/// RSS evaluator over supports built from the precomputed Gram system.
/// Solving G_S beta = c_S costs O(|S|^3) per support instead of one O(N |S|^2)
/// factorization, which is what makes exhaustive enumeration cheap at m = 16.
/// Winners are always refit through fit_subset, so reported coefficients and
/// RSS come from the QR path.
class GramScreen {
 public:
  GramScreen(const CandidateLibrary& lib, bool with_intercept)
      : with_intercept_(with_intercept), m_(lib.n_terms()) {
    Eigen::MatrixXd b(lib.n_samples(), m_ + (with_intercept ? 1 : 0));
    b.leftCols(m_) = lib.matrix;
    if (with_intercept) b.col(m_).setOnes();
    gram_ = b.transpose() * b;
    cross_ = b.transpose() * lib.target;
    target_sq_ = lib.target.squaredNorm();
  }

  /// RSS of the least-squares fit on `support`, or nullopt when the Gram
  /// submatrix is numerically singular.
  std::optional<double> rss(const std::vector<int>& support) const {
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    const Eigen::Index p = k + (with_intercept_ ? 1 : 0);
    Eigen::MatrixXd g(p, p);
    Eigen::VectorXd c(p);
    auto index_of = [&](Eigen::Index i) {
      return i < k ? static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)]) : m_;
    };
    for (Eigen::Index i = 0; i < p; ++i) {
      c(i) = cross_(index_of(i));
      for (Eigen::Index j = 0; j < p; ++j) g(i, j) = gram_(index_of(i), index_of(j));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    const double dmax = diag.maxCoeff();
    const double dmin = diag.minCoeff();
    if (!(dmin > 0.0) || dmin < 1e-10 * dmax) return std::nullopt;
    const Eigen::VectorXd beta = llt.solve(c);
    return std::max(0.0, target_sq_ - c.dot(beta));
  }

 private:
  bool with_intercept_;
  Eigen::Index m_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd cross_;
  double target_sq_ = 0.0;
};

// Advances `indices` to the next size-k combination of {0..n-1} in
// lexicographic order; returns false after the last one.
bool next_combination(std::vector<int>& indices, int n) {
  const int k = static_cast<int>(indices.size());
  for (int i = k - 1; i >= 0; --i) {
    if (indices[static_cast<std::size_t>(i)] < n - k + i) {
      ++indices[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        indices[static_cast<std::size_t>(j)] = indices[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

ModelFit best_of_size_exhaustive(const CandidateLibrary& lib, const GramScreen& screen, int k,
                                 bool with_intercept) {
  const int m = static_cast<int>(lib.n_terms());
  std::set<std::vector<int>> rejected;
  while (true) {
    std::vector<int> current(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i;
    std::optional<std::vector<int>> best;
    double best_rss = std::numeric_limits<double>::infinity();
    do {
      if (rejected.count(current)) continue;
      if (auto r = screen.rss(current); r && *r < best_rss) {
        best_rss = *r;
        best = current;
      }
    } while (next_combination(current, m));
    if (!best) {
      throw Error(ErrorCode::RankDeficient,
                  "every size-" + std::to_string(k) + " support is degenerate");
    }
    try {
      return fit_subset(lib, *best, with_intercept);
    } catch (const Error& e) {
      // Screening and the QR rank test can disagree on a borderline support;
      // drop it and rescan.
      if (e.code() != ErrorCode::RankDeficient) throw;
      rejected.insert(*best);
    }
  }
}

std::vector<ModelFit> forward_selection(const CandidateLibrary& lib, const GramScreen& screen,
                                        int max_size, bool with_intercept) {
  const int m = static_cast<int>(lib.n_terms());
  std::vector<ModelFit> fits;
  std::vector<int> current;
  for (int k = 1; k <= max_size; ++k) {
    int best_j = -1;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      if (std::find(current.begin(), current.end(), j) != current.end()) continue;
      std::vector<int> trial = current;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), j), j);
      if (auto r = screen.rss(trial); r && *r < best_rss) {
        best_rss = *r;
        best_j = j;
      }
    }
    if (best_j < 0) {
      throw Error(ErrorCode::RankDeficient,
                  "forward selection found no non-degenerate extension at size " +
                      std::to_string(k));
    }
    current.insert(std::lower_bound(current.begin(), current.end(), best_j), best_j);
    fits.push_back(fit_subset(lib, current, with_intercept));
  }
  return fits;
}

}  // namespace

Eigen::VectorXd ModelFit::predict(const CandidateLibrary& lib) const {
  Eigen::VectorXd yhat = Eigen::VectorXd::Constant(lib.n_samples(), intercept);
  for (std::size_t j = 0; j < support.size(); ++j) {
    yhat += coefficients(static_cast<Eigen::Index>(j)) * lib.matrix.col(support[j]);
  }
  return yhat;
}

double gaussian_loglik(double rss, long n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  if (!(rss >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rss must be nonnegative");
  if (rss == 0.0) return std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  return -0.5 * nd * (std::log(kTwoPi * rss / nd) + 1.0);
}

ModelFit fit_subset(const CandidateLibrary& lib, const std::vector<int>& support,
                    bool with_intercept) {
  const std::vector<int> sorted = normalized_support(lib, support);
  const Eigen::Index k = static_cast<Eigen::Index>(sorted.size());
  const Eigen::MatrixXd a = design_matrix(lib, sorted, with_intercept);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < a.cols()) {
    throw Error(ErrorCode::RankDeficient, "selected columns are rank deficient (rank " +
                                              std::to_string(qr.rank()) + " of " +
                                              std::to_string(a.cols()) + ")");
  }
  const Eigen::VectorXd x = qr.solve(lib.target);

  ModelFit fit;
  fit.support = sorted;
  fit.coefficients = x.head(k);
  fit.has_intercept = with_intercept;
  fit.intercept = with_intercept ? x(k) : 0.0;
  fit.rss = (lib.target - a * x).squaredNorm();
  fit.n_samples = static_cast<long>(lib.n_samples());
  fit.log_likelihood = gaussian_loglik(fit.rss, fit.n_samples);
  fit.dof = static_cast<int>(k) + (with_intercept ? 1 : 0);
  return fit;
}

std::vector<ModelFit> best_subsets(const CandidateLibrary& lib, int max_size,
                                   SubsetStrategy strategy, bool with_intercept) {
  if (max_size < 1 || max_size > lib.n_terms()) {
    throw Error(ErrorCode::InvalidArgument, "max_size must lie in [1, " +
                                                std::to_string(lib.n_terms()) + "], got " +
                                                std::to_string(max_size));
  }
  GramScreen screen(lib, with_intercept);
  if (strategy == SubsetStrategy::Forward) {
    return forward_selection(lib, screen, max_size, with_intercept);
  }
  std::vector<ModelFit> fits;
  fits.reserve(static_cast<std::size_t>(max_size));
  for (int k = 1; k <= max_size; ++k) {
    fits.push_back(best_of_size_exhaustive(lib, screen, k, with_intercept));
  }
  return fits;
}

ModelFit best_subset_of_size(const CandidateLibrary& lib, int size, SubsetStrategy strategy,
                             bool with_intercept) {
  if (size < 1 || size > lib.n_terms()) {
    throw Error(ErrorCode::InvalidArgument, "size must lie in [1, " +
                                                std::to_string(lib.n_terms()) + "], got " +
                                                std::to_string(size));
  }
  GramScreen screen(lib, with_intercept);
  if (strategy == SubsetStrategy::Forward) {
    return forward_selection(lib, screen, size, with_intercept).back();
  }
  return best_of_size_exhaustive(lib, screen, size, with_intercept);
}

}  // namespace pdesel
