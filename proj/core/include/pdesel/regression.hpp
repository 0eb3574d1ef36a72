#pragma once

#include <vector>

#include "pdesel/candidate_library.hpp"

namespace pdesel {

/// One fitted subset model: which columns are active, their least-squares
/// coefficients, the fitted intercept, and the Gaussian likelihood summary
/// every criterion consumes.
struct ModelFit {
  std::vector<int> support;      // sorted, unique column indices
  Eigen::VectorXd coefficients;  // aligned with support
  double intercept = 0.0;        // 0 when fitted without an intercept
  bool has_intercept = true;
  double rss = 0.0;
  double log_likelihood = 0.0;  // +inf marks an exact fit (rss == 0)
  long n_samples = 0;
  int dof = 0;  // fitted parameter count: |support| + 1 with intercept, |support| without

  int support_size() const { return static_cast<int>(support.size()); }

  /// Fitted values Phi_S * xi_S + intercept for the library the fit came from.
  Eigen::VectorXd predict(const CandidateLibrary& lib) const;
};

/// Maximized Gaussian log-likelihood with the variance profiled out at its MLE
/// sigma^2 = rss/n:  -(n/2) * (log(2*pi*rss/n) + 1).
/// Constant terms are kept so criterion identities hold exactly, not merely up
/// to an additive constant. rss == 0 returns +infinity (the exact-fit flag).
double gaussian_loglik(double rss, long n);

/// Ordinary least squares restricted to `support` (plus an appended all-ones
/// column when with_intercept). Solved via column-pivoted Householder QR with
/// rank tolerance 1e-10 relative to the dominant column; a detected rank drop
/// throws RankDeficient, an empty support throws EmptySupport.
ModelFit fit_subset(const CandidateLibrary& lib, const std::vector<int>& support,
                    bool with_intercept = true);

enum class SubsetStrategy { Exhaustive, Forward };

/// Minimum-RSS model per support size 1..max_size.
///
/// Exhaustive enumerates every size-k support and is the per-size optimum;
/// Forward grows one greedy path and reads the best model of each size off it.
/// Ties are broken by the lexicographically smallest support, so results do
/// not depend on evaluation order. Degenerate supports are skipped;
/// RankDeficient propagates only if every support of some size is degenerate.
std::vector<ModelFit> best_subsets(const CandidateLibrary& lib, int max_size,
                                   SubsetStrategy strategy, bool with_intercept = true);

/// Minimum-RSS model of exactly `size` terms. Under Forward this is the
/// size-`size` prefix of the greedy path, so it matches best_subsets(size)
/// back element by element. Lets callers treat each size independently when a
/// single degenerate size should not abort the rest.
ModelFit best_subset_of_size(const CandidateLibrary& lib, int size, SubsetStrategy strategy,
                             bool with_intercept = true);

}  // namespace pdesel
