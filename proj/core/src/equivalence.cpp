#include "pdesel/equivalence.hpp"

#include <cmath>

#include <json.hpp>

#include "pdesel/error.hpp"

namespace pdesel {

int AugmentedModel::nonzero_count() const {
  int count = 0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (coefficients(i) != 0.0) ++count;
  }
  return count;
}

AugmentedModel augment(const ModelFit& fit, const CandidateLibrary& lib, int u_int) {
  if (u_int < 1) {
    throw Error(ErrorCode::DegenerateU,
                "u_int must be at least 1 so the appended block has >= 2 columns");
  }
  if (std::abs(fit.intercept) < 1e-14) {
    throw Error(ErrorCode::ZeroIntercept,
                "augmentation needs a nonzero intercept; the appended columns would vanish");
  }
  if (fit.n_samples != static_cast<long>(lib.n_samples())) {
    throw Error(ErrorCode::InvalidArgument, "fit does not belong to this library");
  }

  const Eigen::Index n = lib.n_samples();
  const Eigen::Index k = static_cast<Eigen::Index>(fit.support.size());
  const Eigen::Index extra = static_cast<Eigen::Index>(u_int) + 1;

  AugmentedModel model;
  model.u_int = u_int;
  model.base_dof = fit.dof;
  model.matrix.resize(n, k + extra);
  for (Eigen::Index j = 0; j < k; ++j) {
    model.matrix.col(j) = lib.matrix.col(fit.support[static_cast<std::size_t>(j)]);
  }
  const double share = fit.intercept / static_cast<double>(extra);
  model.matrix.rightCols(extra).setConstant(share);

  model.coefficients.resize(k + extra);
  model.coefficients.head(k) = fit.coefficients;
  model.coefficients.tail(extra).setOnes();
  return model;
}

EquivalenceReport verify_identity(const ModelFit& fit, const CandidateLibrary& lib,
                                  const UncertaintyValue& u, double perturbation) {
  AugmentedModel augmented = augment(fit, lib, u.rounded);
  if (perturbation != 0.0) augmented.coefficients(0) += perturbation;

  EquivalenceReport report;
  report.n = fit.n_samples;
  report.k = fit.support_size();
  report.p = fit.dof;
  report.u_rounded = u.rounded;

  const double log_n = std::log(static_cast<double>(fit.n_samples));
  report.ubic_total =
      -2.0 * fit.log_likelihood + log_n * static_cast<double>(report.p + u.rounded);

  const double rss_aug = (lib.target - augmented.predict()).squaredNorm();
  report.bic_aug_total = -2.0 * gaussian_loglik(rss_aug, fit.n_samples) +
                         log_n * static_cast<double>(augmented.nonzero_count());

  report.abs_diff = std::abs(report.ubic_total - report.bic_aug_total);
  report.pass = report.abs_diff <= 1e-9 * std::max(1.0, std::abs(report.ubic_total));
  return report;
}

std::string equivalence_report_json(const EquivalenceReport& report) {
  nlohmann::json j{{"ubic_total", report.ubic_total},
                   {"bic_aug_total", report.bic_aug_total},
                   {"abs_diff", report.abs_diff},
                   {"pass", report.pass},
                   {"n", report.n},
                   {"k", report.k},
                   {"p", report.p},
                   {"u_rounded", report.u_rounded}};
  return j.dump();
}

}  // namespace pdesel
