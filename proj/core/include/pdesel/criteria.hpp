#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdesel/regression.hpp"

namespace pdesel {

enum class Criterion { BIC, UBIC, ICOMP };

const char* to_string(Criterion c) noexcept;

/// One scored model. `total` is always computed as neg2_loglik + penalty in a
/// single shared expression, so identities between criteria (for example
/// ubic(fit, 0) == bic(fit)) hold bit for bit.
struct CriterionScore {
  Criterion criterion = Criterion::BIC;
  double neg2_loglik = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  int support_size = 0;
  long n_samples = 0;
  std::optional<double> uncertainty;  // UBIC only
  std::optional<double> a_n;          // ICOMP only
  std::optional<double> complexity;   // ICOMP only: C(F^-1)
};

/// Maximal information complexity of a covariance-like matrix, with the trace
/// and log-determinant it was built from. value is zero iff all eigenvalues
/// are equal.
struct ComplexityReport {
  double value = 0.0;
  double trace = 0.0;
  double log_det = 0.0;
  int dim = 0;
};

/// BIC: -2 log L + log(N) * |support|. The intercept is not counted in the
/// support penalty. Throws ExactFit when rss == 0 (the likelihood is not
/// finite there).
CriterionScore bic(const ModelFit& fit);

/// UBIC: -2 log L + log(N) * (|support| + u), u >= 0 the quantified model
/// uncertainty. Throws NegativeUncertainty for u < 0 and ExactFit as bic does.
CriterionScore ubic(const ModelFit& fit, double uncertainty);

/// C1 complexity (s/2) * log(tr/s) - (1/2) * log det of a symmetric positive
/// definite matrix. The log-determinant is accumulated from the Cholesky
/// factor; positive definiteness is checked on the eigenvalues (any one at or
/// below machine resolution of the spectrum throws NotPositiveDefinite, as
/// does asymmetry beyond 1e-10 relative).
ComplexityReport max_info_complexity(const Eigen::MatrixXd& cov);

/// Estimated inverse Fisher information of the Gaussian subset regression:
/// block-diag( sigma^2 * (Phi_S^T Phi_S)^-1 , 2 sigma^4 / N ) with
/// sigma^2 = rss / N. The trailing block is the variance parameter, so the
/// matrix has dimension |support| + 1.
Eigen::MatrixXd estimate_ifim_inverse(const ModelFit& fit, const CandidateLibrary& lib);

/// ICOMP: -2 log L + 2 * a_n * C(F^-1) with C from max_info_complexity of
/// estimate_ifim_inverse. a_n must be positive.
CriterionScore icomp(const ModelFit& fit, const CandidateLibrary& lib, double a_n);

/// Scores shifted so the minimum maps to zero; the plotting artifact of the
/// support-size sweeps. All entries must carry the same criterion.
std::vector<double> relative_scores(const std::vector<CriterionScore>& scores);

struct AnScanRow {
  double a_n = 0.0;
  std::vector<int> selected_support;
  int selected_size = 0;
  double icomp_total = 0.0;
  bool matches_oracle = false;
};

struct AnScanReport {
  std::vector<AnScanRow> rows;                  // one per schedule entry
  std::optional<double> first_matching_a_n;     // smallest a_n selecting the oracle
  std::vector<int> oracle_support;
};

/// Evaluates ICOMP over `fits` for every a_n in the ascending `schedule` and
/// records which support each setting selects (argmin of totals; ties go to
/// the smaller support, then lexicographic order). The report notes the
/// smallest a_n whose selection equals `oracle_support`, when there is one.
AnScanReport scan_a_n(const std::vector<ModelFit>& fits, const CandidateLibrary& lib,
                      const std::vector<double>& schedule, const std::vector<int>& oracle_support);

/// Writes the two-column CSV (support_size, relative score) consumed by
/// external plotters.
void write_relative_scores_csv(const std::vector<CriterionScore>& scores, const std::string& path);

std::string criterion_score_json(const CriterionScore& score);

}  // namespace pdesel
