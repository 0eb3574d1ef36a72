#include "pdesel/uncertainty.hpp"

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "pdesel/error.hpp"

namespace pdesel {

int nint(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw Error(ErrorCode::InvalidArgument, "nint expects a positive finite value");
  }
  return static_cast<int>(std::floor(u + 0.5));
}

UncertaintyValue make_uncertainty(double raw) {
  if (!(raw > 0.0) || !std::isfinite(raw)) {
    throw Error(ErrorCode::InvalidArgument, "uncertainty must be positive and finite");
  }
  return UncertaintyValue{raw, nint(raw)};
}

UncertaintyValue quantify_default(const ModelFit& fit, const CandidateLibrary& lib, int n_boot,
                                  unsigned long long seed) {
  if (n_boot < 10) throw Error(ErrorCode::InvalidArgument, "n_boot must be at least 10");
  if (fit.support.empty()) throw Error(ErrorCode::EmptySupport, "fit has no support");
  if (fit.n_samples != static_cast<long>(lib.n_samples())) {
    throw Error(ErrorCode::InvalidArgument, "fit does not belong to this library");
  }

  const Eigen::Index n = lib.n_samples();
  const Eigen::Index k = static_cast<Eigen::Index>(fit.support.size());
  Eigen::MatrixXd a(n, k + (fit.has_intercept ? 1 : 0));
  for (Eigen::Index j = 0; j < k; ++j) {
    a.col(j) = lib.matrix.col(fit.support[static_cast<std::size_t>(j)]);
  }
  if (fit.has_intercept) a.col(k).setOnes();

  // The design stays fixed across replicates, so factor once and reuse.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols()) {
    throw Error(ErrorCode::RankDeficient, "bootstrap support is rank deficient");
  }

  const Eigen::VectorXd fitted = fit.predict(lib);
  const Eigen::VectorXd residuals = lib.target - fitted;

  Eigen::MatrixXd draws(n_boot, k);
  Eigen::VectorXd resampled(n);
  for (int b = 0; b < n_boot; ++b) {
    // Modulo reduction keeps index streams identical across standard-library
    // implementations; the bias is ~2^-50 at these sample counts.
    std::mt19937_64 rng(seed + static_cast<unsigned long long>(b));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(rng() % static_cast<unsigned long long>(n));
      resampled(i) = fitted(i) + residuals(idx);
    }
    draws.row(b) = qr.solve(resampled).head(k).transpose();
  }

  double total_cv = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mean = draws.col(j).mean();
    if (std::abs(mean) < 1e-12) {
      throw Error(ErrorCode::UnstableCoefficient,
                  "bootstrap mean of coefficient " +
                      std::to_string(fit.support[static_cast<std::size_t>(j)]) +
                      " is numerically zero; coefficient of variation undefined");
    }
    const double ss = (draws.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n_boot - 1));
    total_cv += sd / std::abs(mean);
  }
  return make_uncertainty(1.0 + total_cv);
}

}  // namespace pdesel
