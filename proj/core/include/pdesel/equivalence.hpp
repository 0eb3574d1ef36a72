#pragma once

#include <string>

#include "pdesel/regression.hpp"
#include "pdesel/uncertainty.hpp"

namespace pdesel {

/// The constructed overparameterized model: support columns of the base fit
/// followed by u_int + 1 identical constant columns that carry the intercept,
/// paired with coefficients [xi_S ; 1, ..., 1]. Its predictions coincide with
/// the base model's, while its nonzero-coefficient count is u_int + p.
struct AugmentedModel {
  Eigen::MatrixXd matrix;        // N x (|S| + u_int + 1)
  Eigen::VectorXd coefficients;  // [xi_S ; ones(u_int + 1)]
  int u_int = 0;
  int base_dof = 0;  // p of the base fit

  int nonzero_count() const;
  Eigen::VectorXd predict() const { return matrix * coefficients; }
};

/// Builds the augmented model from a fitted subset model. Each appended column
/// equals intercept / (u_int + 1) times the ones vector, so the u_int + 1 unit
/// coefficients jointly reproduce the intercept contribution.
///
/// Throws ZeroIntercept when |intercept| < 1e-14 (the appended columns would
/// be zero) and DegenerateU when u_int < 1.
AugmentedModel augment(const ModelFit& fit, const CandidateLibrary& lib, int u_int);

/// Numerical comparison of the uncertainty-penalized score of the base model
/// against the plain BIC of its augmented counterpart.
///
/// ubic_total uses the compact parameter count p = k + 1 (intercept absorbed
/// into the coefficient vector): -2 log L + log(N) (p + u). bic_aug_total
/// recomputes the augmented model's RSS from scratch and penalizes its actual
/// nonzero-coefficient count. The two conventions are labeled so neither is
/// mistaken for the public ubic(), which penalizes |support| only.
struct EquivalenceReport {
  double ubic_total = 0.0;     // compact-form UBIC of the base model
  double bic_aug_total = 0.0;  // BIC of the augmented model
  double abs_diff = 0.0;
  bool pass = false;
  long n = 0;
  int k = 0;
  int p = 0;
  int u_rounded = 0;
};

/// Builds augment(fit, lib, u.rounded), recomputes its residual sum of squares
/// against the library target, and reports both totals. pass is true when
/// |ubic_total - bic_aug_total| <= 1e-9 * max(1, |ubic_total|).
///
/// A nonzero `perturbation` is added to the first augmented coefficient before
/// the RSS recomputation; it breaks the construction on purpose and serves as
/// the negative control.
EquivalenceReport verify_identity(const ModelFit& fit, const CandidateLibrary& lib,
                                  const UncertaintyValue& u, double perturbation = 0.0);

std::string equivalence_report_json(const EquivalenceReport& report);

}  // namespace pdesel
