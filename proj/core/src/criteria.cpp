#include "pdesel/criteria.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "pdesel/error.hpp"

namespace pdesel {

namespace {

double require_finite_neg2_loglik(const ModelFit& fit) {
  if (!std::isfinite(fit.log_likelihood)) {
    throw Error(ErrorCode::ExactFit, "criterion undefined for an exact fit (rss == 0)");
  }
  return -2.0 * fit.log_likelihood;
}

// The one place that combines a deviance and a penalty, so every criterion and
// every convention uses the identical floating-point expression.
CriterionScore assemble(Criterion criterion, const ModelFit& fit, double penalty) {
  CriterionScore s;
  s.criterion = criterion;
  s.neg2_loglik = require_finite_neg2_loglik(fit);
  s.penalty = penalty;
  s.total = s.neg2_loglik + s.penalty;
  s.support_size = fit.support_size();
  s.n_samples = fit.n_samples;
  return s;
}

double log_n_penalty(const ModelFit& fit, double u) {
  return std::log(static_cast<double>(fit.n_samples)) * (static_cast<double>(fit.support_size()) + u);
}

}  // namespace

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::BIC: return "BIC";
    case Criterion::UBIC: return "UBIC";
    case Criterion::ICOMP: return "ICOMP";
  }
  return "?";
}

CriterionScore bic(const ModelFit& fit) {
  return assemble(Criterion::BIC, fit, log_n_penalty(fit, 0.0));
}

CriterionScore ubic(const ModelFit& fit, double uncertainty) {
  if (!(uncertainty >= 0.0) || !std::isfinite(uncertainty)) {
    throw Error(ErrorCode::NegativeUncertainty,
                "uncertainty must be finite and nonnegative, got " + std::to_string(uncertainty));
  }
  CriterionScore s = assemble(Criterion::UBIC, fit, log_n_penalty(fit, uncertainty));
  s.uncertainty = uncertainty;
  return s;
}

ComplexityReport max_info_complexity(const Eigen::MatrixXd& cov) {
  const Eigen::Index s = cov.rows();
  if (s < 1 || cov.cols() != s) {
    throw Error(ErrorCode::InvalidArgument, "complexity needs a square matrix");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not symmetric within 1e-10");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "eigendecomposition failed");
  }
  const double lambda_max = eig.eigenvalues().maxCoeff();
  const double lambda_min = eig.eigenvalues().minCoeff();
  // Eigenvalues at or below machine resolution of the spectrum count as zero.
  const double tol = static_cast<double>(s) * std::numeric_limits<double>::epsilon() * lambda_max;
  if (!(lambda_min > tol)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lambda_min) + " is not positive");
  }

  // log det via the Cholesky factor; the eigenvalue route above is reserved
  // for the definiteness check and the test oracle.
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  }

  ComplexityReport report;
  report.dim = static_cast<int>(s);
  report.trace = sym.trace();
  report.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double value =
      0.5 * static_cast<double>(s) * std::log(report.trace / static_cast<double>(s)) -
      0.5 * report.log_det;
  report.value = std::max(0.0, value);  // AM-GM; negatives can only be rounding
  return report;
}

Eigen::MatrixXd estimate_ifim_inverse(const ModelFit& fit, const CandidateLibrary& lib) {
  if (fit.n_samples != static_cast<long>(lib.n_samples())) {
    throw Error(ErrorCode::InvalidArgument, "fit does not belong to this library");
  }
  if (fit.support.empty()) throw Error(ErrorCode::EmptySupport, "fit has no support");
  if (fit.rss <= 0.0) {
    throw Error(ErrorCode::ExactFit, "IFIM estimate undefined for rss == 0");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(fit.support.size());
  const Eigen::Index n = lib.n_samples();
  Eigen::MatrixXd phi(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const int column = fit.support[static_cast<std::size_t>(j)];
    if (column < 0 || column >= lib.n_terms()) {
      throw Error(ErrorCode::InvalidArgument, "fit support index out of range for this library");
    }
    phi.col(j) = lib.matrix.col(column);
  }

  const Eigen::MatrixXd gram = phi.transpose() * phi;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::RankDeficient, "support Gram matrix is singular");
  }
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
  if (diag.minCoeff() < 1e-10 * diag.maxCoeff()) {
    throw Error(ErrorCode::RankDeficient, "support Gram matrix is singular beyond tolerance");
  }

  const double sigma2 = fit.rss / static_cast<double>(fit.n_samples);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::MatrixXd gram_inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
  gram_inv = 0.5 * (gram_inv + gram_inv.transpose()).eval();
  cov.topLeftCorner(k, k) = sigma2 * gram_inv;
  cov(k, k) = 2.0 * sigma2 * sigma2 / static_cast<double>(fit.n_samples);
  return cov;
}

CriterionScore icomp(const ModelFit& fit, const CandidateLibrary& lib, double a_n) {
  if (!(a_n > 0.0) || !std::isfinite(a_n)) {
    throw Error(ErrorCode::InvalidArgument, "a_n must be a positive finite number");
  }
  const ComplexityReport complexity = max_info_complexity(estimate_ifim_inverse(fit, lib));
  CriterionScore s = assemble(Criterion::ICOMP, fit, 2.0 * a_n * complexity.value);
  s.a_n = a_n;
  s.complexity = complexity.value;
  return s;
}

std::vector<double> relative_scores(const std::vector<CriterionScore>& scores) {
  if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no scores to normalize");
  double min_total = scores.front().total;
  for (const auto& s : scores) {
    if (s.criterion != scores.front().criterion) {
      throw Error(ErrorCode::MixedCriteria, "relative scores need a single criterion");
    }
    min_total = std::min(min_total, s.total);
  }
  std::vector<double> rel;
  rel.reserve(scores.size());
  for (const auto& s : scores) rel.push_back(s.total - min_total);
  return rel;
}

AnScanReport scan_a_n(const std::vector<ModelFit>& fits, const CandidateLibrary& lib,
                      const std::vector<double>& schedule, const std::vector<int>& oracle_support) {
  if (fits.empty()) throw Error(ErrorCode::InvalidArgument, "scan needs at least one fit");
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty a_n schedule");
  if (!std::is_sorted(schedule.begin(), schedule.end())) {
    throw Error(ErrorCode::InvalidArgument, "a_n schedule must be sorted ascending");
  }

  AnScanReport report;
  report.oracle_support = oracle_support;
  std::sort(report.oracle_support.begin(), report.oracle_support.end());

  for (double a_n : schedule) {
    const ModelFit* selected = nullptr;
    double selected_total = std::numeric_limits<double>::infinity();
    for (const auto& fit : fits) {
      const double total = icomp(fit, lib, a_n).total;
      const bool better =
          !selected || total < selected_total ||
          (total == selected_total && (fit.support_size() < selected->support_size() ||
                                       (fit.support_size() == selected->support_size() &&
                                        fit.support < selected->support)));
      if (better) {
        selected = &fit;
        selected_total = total;
      }
    }
    AnScanRow row;
    row.a_n = a_n;
    row.selected_support = selected->support;
    row.selected_size = selected->support_size();
    row.icomp_total = selected_total;
    row.matches_oracle = (row.selected_support == report.oracle_support);
    if (row.matches_oracle && !report.first_matching_a_n) report.first_matching_a_n = a_n;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_relative_scores_csv(const std::vector<CriterionScore>& scores,
                               const std::string& path) {
  const std::vector<double> rel = relative_scores(scores);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << "support_size,relative_score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << scores[i].support_size << ',' << format_full(rel[i]) << '\n';
  }
}

std::string criterion_score_json(const CriterionScore& score) {
  nlohmann::json params{{"n", score.n_samples}};
  if (score.uncertainty) params["u"] = *score.uncertainty;
  if (score.a_n) params["a_n"] = *score.a_n;
  if (score.complexity) params["complexity"] = *score.complexity;
  nlohmann::json j{{"criterion", to_string(score.criterion)},
                   {"neg2_loglik", score.neg2_loglik},
                   {"penalty", score.penalty},
                   {"total", score.total},
                   {"support_size", score.support_size},
                   {"params", params}};
  return j.dump();
}

}  // namespace pdesel
