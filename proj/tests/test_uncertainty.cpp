// The bootstrap model-uncertainty quantifier and its rounding conventions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pdesel/candidate_library.hpp"
#include "pdesel/error.hpp"
#include "pdesel/regression.hpp"
#include "pdesel/rng.hpp"
#include "pdesel/uncertainty.hpp"

namespace {

using pdesel::CandidateLibrary;
using pdesel::ErrorCode;
using pdesel::ModelFit;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const pdesel::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a pdesel::Error, none was thrown");
}

// One-column design x ~ N(0,1) with y = 2 x + 0.5 intercept + sigma * noise.
CandidateLibrary one_column_library(long n, double sigma, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd phi(n, 1);
  Eigen::VectorXd y(n);
  for (long i = 0; i < n; ++i) {
    phi(i, 0) = pdesel::rng::normal(gen);
    y(i) = 2.0 * phi(i, 0) + 0.5 + sigma * pdesel::rng::normal(gen);
  }
  return CandidateLibrary(std::move(phi), {"c1"}, std::move(y));
}

}  // namespace

TEST_CASE("uncertainty: nint rounds halves up") {
  CHECK(pdesel::nint(0.5) == 1);
  CHECK(pdesel::nint(1.4) == 1);
  CHECK(pdesel::nint(1.5) == 2);
  CHECK(pdesel::nint(2.5) == 3);
  CHECK(pdesel::nint(2.499) == 2);
  CHECK(pdesel::nint(3.0) == 3);
  CHECK(code_of([] { pdesel::nint(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { pdesel::nint(-1.5); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { pdesel::nint(std::nan("")); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("uncertainty: make_uncertainty pairs the raw value with its rounding") {
  const pdesel::UncertaintyValue u = pdesel::make_uncertainty(1.26);
  CHECK(u.raw == 1.26);
  CHECK(u.rounded == 1);
  CHECK(pdesel::make_uncertainty(2.5).rounded == 3);
  CHECK(code_of([] { pdesel::make_uncertainty(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { pdesel::make_uncertainty(-0.2); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { pdesel::make_uncertainty(std::numeric_limits<double>::infinity()); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("uncertainty: a noiseless fit reports unit uncertainty") {
  // With zero residuals every replicate refits the identical coefficients, so
  // the total coefficient of variation vanishes.
  const long n = 60;
  std::mt19937_64 gen(2);
  Eigen::MatrixXd phi(n, 2);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) phi(i, j) = pdesel::rng::normal(gen);
  const Eigen::VectorXd y =
      2.0 * phi.col(0) - 1.0 * phi.col(1) + Eigen::VectorXd::Constant(n, 0.5);
  const CandidateLibrary lib(phi, {"c1", "c2"}, y);

  const ModelFit fit = pdesel::fit_subset(lib, {0, 1});
  const pdesel::UncertaintyValue u = pdesel::quantify_default(fit, lib, 50, 0);
  CHECK(u.raw == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(u.rounded == 1);
}

TEST_CASE("uncertainty: replicate draws are deterministic in the seed") {
  const CandidateLibrary lib = one_column_library(200, 0.5, 9);
  const ModelFit fit = pdesel::fit_subset(lib, {0});

  const pdesel::UncertaintyValue a = pdesel::quantify_default(fit, lib, 100, 42);
  const pdesel::UncertaintyValue b = pdesel::quantify_default(fit, lib, 100, 42);
  const pdesel::UncertaintyValue c = pdesel::quantify_default(fit, lib, 100, 43);
  CHECK(a.raw == b.raw);
  CHECK(a.raw != c.raw);
  CHECK(a.raw > 1.0);  // noisy data leaves a strictly positive spread
}

TEST_CASE("uncertainty: bootstrap spread tracks the analytic standard error") {
  // For a single column, cv = sd(beta) / |beta| with the residual bootstrap
  // approximating sd(beta) ~ sigma_res / ||x||. 2000 replicates estimate the
  // standard deviation to ~2%, so a 30% band is comfortable yet still catches
  // wrong scalings (sqrt(n) errors change the value fivefold here).
  const long n = 400;
  const CandidateLibrary lib = one_column_library(n, 0.5, 13);
  const ModelFit fit = pdesel::fit_subset(lib, {0});

  const double sigma_res = std::sqrt(fit.rss / static_cast<double>(n));
  const double se = sigma_res / std::sqrt(lib.matrix.col(0).squaredNorm());
  const double expected_cv = se / std::abs(fit.coefficients(0));

  const pdesel::UncertaintyValue u = pdesel::quantify_default(fit, lib, 2000, 7);
  CHECK(u.raw - 1.0 == doctest::Approx(expected_cv).epsilon(0.30));
}

TEST_CASE("uncertainty: column rescaling leaves the coefficient of variation unchanged") {
  const CandidateLibrary base = one_column_library(150, 0.4, 17);
  CandidateLibrary scaled = base;
  scaled.matrix.col(0) *= 10.0;

  const pdesel::UncertaintyValue u_base =
      pdesel::quantify_default(pdesel::fit_subset(base, {0}), base, 200, 3);
  const pdesel::UncertaintyValue u_scaled =
      pdesel::quantify_default(pdesel::fit_subset(scaled, {0}), scaled, 200, 3);
  CHECK(u_base.raw == doctest::Approx(u_scaled.raw).epsilon(1e-9));
}

TEST_CASE("uncertainty: the quantifier validates its inputs") {
  const CandidateLibrary lib = one_column_library(100, 0.5, 23);
  const ModelFit fit = pdesel::fit_subset(lib, {0});

  CHECK(code_of([&] { pdesel::quantify_default(fit, lib, 9, 0); }) == ErrorCode::InvalidArgument);

  ModelFit empty = fit;
  empty.support.clear();
  CHECK(code_of([&] { pdesel::quantify_default(empty, lib, 50, 0); }) == ErrorCode::EmptySupport);

  ModelFit stray = fit;
  stray.n_samples = 99;
  CHECK(code_of([&] { pdesel::quantify_default(stray, lib, 50, 0); }) ==
        ErrorCode::InvalidArgument);
}
