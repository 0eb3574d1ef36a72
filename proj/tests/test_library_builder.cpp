// Candidate-library construction: stencil correctness, the term basis, the
// sampling rules, and coefficient recovery on the Burgers benchmark.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdesel/candidate_library.hpp"
#include "pdesel/error.hpp"
#include "pdesel/field.hpp"
#include "pdesel/library_builder.hpp"
#include "pdesel/regression.hpp"

namespace {

using pdesel::CandidateLibrary;
using pdesel::Differentiation;
using pdesel::ErrorCode;
using pdesel::FieldData;
using pdesel::LibrarySpec;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const pdesel::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a pdesel::Error, none was thrown");
}

// Analytic test field u(x, t) = f(x, t) on a uniform grid.
template <typename F>
FieldData analytic_field(double x0, double dx, long n_x, double dt, long n_t, F f) {
  FieldData field;
  field.x.resize(n_x);
  field.t.resize(n_t);
  for (long i = 0; i < n_x; ++i) field.x(i) = x0 + dx * static_cast<double>(i);
  for (long j = 0; j < n_t; ++j) field.t(j) = dt * static_cast<double>(j);
  field.u.resize(n_x, n_t);
  for (long i = 0; i < n_x; ++i)
    for (long j = 0; j < n_t; ++j) field.u(i, j) = f(field.x(i), field.t(j));
  return field;
}

// RMS error of every stencil against the analytic derivatives of
// u = sin(x) exp(-t) over the sampled interior.
struct StencilErrors {
  double u_x = 0.0;
  double u_xx = 0.0;
  double u_xxx = 0.0;
  double u_t = 0.0;
};

StencilErrors stencil_errors(long n_x, long n_t) {
  const double dx = 16.0 / static_cast<double>(n_x);
  const double dt = 1.0 / static_cast<double>(n_t - 1);
  const FieldData field = analytic_field(-8.0, dx, n_x, dt, n_t, [](double x, double t) {
    return std::sin(x) * std::exp(-t);
  });

  const Eigen::MatrixXd d1 = pdesel::spatial_derivative(field, 1, Differentiation::CentralFd);
  const Eigen::MatrixXd d2 = pdesel::spatial_derivative(field, 2, Differentiation::CentralFd);
  const Eigen::MatrixXd d3 = pdesel::spatial_derivative(field, 3, Differentiation::CentralFd);
  const Eigen::MatrixXd dt_num = pdesel::time_derivative(field);

  StencilErrors errors;
  long count = 0;
  for (long i = 2; i + 2 < n_x; ++i) {
    for (long j = 1; j + 1 < n_t; ++j) {
      const double decay = std::exp(-field.t(j));
      const double s = std::sin(field.x(i)) * decay;
      const double c = std::cos(field.x(i)) * decay;
      errors.u_x += (d1(i, j) - c) * (d1(i, j) - c);
      errors.u_xx += (d2(i, j) + s) * (d2(i, j) + s);
      errors.u_xxx += (d3(i, j) + c) * (d3(i, j) + c);
      errors.u_t += (dt_num(i, j) + s) * (dt_num(i, j) + s);
      ++count;
    }
  }
  const double scale = 1.0 / static_cast<double>(count);
  errors.u_x = std::sqrt(errors.u_x * scale);
  errors.u_xx = std::sqrt(errors.u_xx * scale);
  errors.u_xxx = std::sqrt(errors.u_xxx * scale);
  errors.u_t = std::sqrt(errors.u_t * scale);
  return errors;
}

}  // namespace

TEST_CASE("library: stencils are exact on a linear profile") {
  const FieldData field =
      analytic_field(0.0, 0.1, 64, 0.05, 10, [](double x, double) { return x; });

  const Eigen::MatrixXd d1 = pdesel::spatial_derivative(field, 1, Differentiation::CentralFd);
  const Eigen::MatrixXd d2 = pdesel::spatial_derivative(field, 2, Differentiation::CentralFd);
  const Eigen::MatrixXd d3 = pdesel::spatial_derivative(field, 3, Differentiation::CentralFd);
  const Eigen::MatrixXd dt_num = pdesel::time_derivative(field);

  for (long i = 2; i + 2 < 64; ++i) {
    for (long j = 0; j < 10; ++j) {
      CHECK(std::abs(d1(i, j) - 1.0) <= 1e-10);
      CHECK(std::abs(d2(i, j)) <= 1e-10);
      CHECK(std::abs(d3(i, j)) <= 1e-10);
      CHECK(std::abs(dt_num(i, j)) <= 1e-10);
    }
  }
  // Order zero hands back the field itself.
  const Eigen::MatrixXd d0 = pdesel::spatial_derivative(field, 0, Differentiation::CentralFd);
  CHECK((d0.array() == field.u.array()).all());
}

TEST_CASE("library: spectral derivatives are exact on resolved fourier modes") {
  const long n = 64;
  const double dx = 2.0 * std::numbers::pi / static_cast<double>(n);
  const FieldData field =
      analytic_field(0.0, dx, n, 0.1, 4, [](double x, double) { return std::sin(x); });

  const Eigen::MatrixXd d1 = pdesel::spatial_derivative(field, 1, Differentiation::Spectral);
  const Eigen::MatrixXd d2 = pdesel::spatial_derivative(field, 2, Differentiation::Spectral);
  const Eigen::MatrixXd d3 = pdesel::spatial_derivative(field, 3, Differentiation::Spectral);

  for (long i = 0; i < n; ++i) {
    CHECK(std::abs(d1(i, 0) - std::cos(field.x(i))) <= 1e-10);
    CHECK(std::abs(d2(i, 0) + std::sin(field.x(i))) <= 1e-10);
    CHECK(std::abs(d3(i, 0) + std::cos(field.x(i))) <= 1e-9);
  }
}

TEST_CASE("library: spectral odd orders stay finite on the nyquist mode") {
  // cos(n x / 2) lives entirely on the Nyquist frequency of an even grid; its
  // odd-order spectral derivative is conventionally zeroed rather than made up.
  const long n = 32;
  const double dx = 2.0 * std::numbers::pi / static_cast<double>(n);
  const FieldData field = analytic_field(0.0, dx, n, 0.1, 3, [&](double x, double) {
    return std::cos(16.0 * x) + 0.1;  // +0.1 keeps no column identically zero
  });
  const Eigen::MatrixXd d1 = pdesel::spatial_derivative(field, 1, Differentiation::Spectral);
  CHECK(d1.allFinite());
  CHECK(d1.cwiseAbs().maxCoeff() <= 1e-9);  // derivative of the constant part
}

TEST_CASE("library: observed stencil order is two under refinement") {
  const StencilErrors coarse = stencil_errors(64, 51);
  const StencilErrors medium = stencil_errors(128, 101);
  const StencilErrors fine = stencil_errors(256, 201);

  const auto order = [](double e_coarse, double e_fine) {
    return std::log2(e_coarse / e_fine);
  };
  CHECK(order(coarse.u_x, medium.u_x) >= 1.8);
  CHECK(order(medium.u_x, fine.u_x) >= 1.8);
  CHECK(order(coarse.u_xx, medium.u_xx) >= 1.8);
  CHECK(order(medium.u_xx, fine.u_xx) >= 1.8);
  CHECK(order(coarse.u_xxx, medium.u_xxx) >= 1.8);
  CHECK(order(medium.u_xxx, fine.u_xxx) >= 1.8);
  CHECK(order(coarse.u_t, medium.u_t) >= 1.8);
  CHECK(order(medium.u_t, fine.u_t) >= 1.8);

  // The error constant e / h^2 stays bounded along the refinement path.
  CHECK(fine.u_xx / std::pow(16.0 / 256.0, 2) < 10.0);
}

TEST_CASE("library: term names enumerate the default basis in order") {
  const std::vector<std::string> expected{
      "1",   "u_x",     "u_xx",     "u_xxx",     "u",   "u*u_x",   "u*u_xx",   "u*u_xxx",
      "u^2", "u^2*u_x", "u^2*u_xx", "u^2*u_xxx", "u^3", "u^3*u_x", "u^3*u_xx", "u^3*u_xxx"};
  const LibrarySpec spec;
  REQUIRE(spec.n_terms() == 16);

  int index = 0;
  for (int a = 0; a <= spec.max_poly_degree; ++a) {
    for (int b = 0; b <= spec.max_deriv_order; ++b) {
      CHECK(pdesel::term_name(a, b) == expected[static_cast<size_t>(index)]);
      ++index;
    }
  }
}

TEST_CASE("library: columns compose powers and derivatives exactly") {
  const FieldData field = pdesel::simulate_burgers(
      0.1, pdesel::BurgersDomain{-8.0, 8.0, 64, 2.0, 50}, pdesel::InitialCondition::GaussianPulse,
      0);
  const LibrarySpec spec;
  const CandidateLibrary lib = pdesel::build_library(field, spec, 400, 3);
  REQUIRE(lib.n_terms() == 16);
  REQUIRE(lib.n_samples() == 400);
  lib.validate();

  const Eigen::VectorXd ones = lib.matrix.col(lib.column_index("1"));
  CHECK(ones.minCoeff() == 1.0);
  CHECK(ones.maxCoeff() == 1.0);

  // Power and product columns are bitwise products of their factors because
  // the builder forms them from the same incremental powers.
  const Eigen::VectorXd u = lib.matrix.col(lib.column_index("u"));
  const Eigen::VectorXd u2 = lib.matrix.col(lib.column_index("u^2"));
  const Eigen::VectorXd u_xx = lib.matrix.col(lib.column_index("u_xx"));
  const Eigen::VectorXd u_u_xx = lib.matrix.col(lib.column_index("u*u_xx"));
  for (long s = 0; s < 400; ++s) {
    CHECK(u2(s) == u(s) * u(s));
    CHECK(u_u_xx(s) == u(s) * u_xx(s));
  }
}

TEST_CASE("library: target noise is calibrated, seeded, and column-free") {
  const FieldData field = pdesel::simulate_burgers(
      0.1, pdesel::BurgersDomain{-8.0, 8.0, 64, 2.0, 50}, pdesel::InitialCondition::GaussianPulse,
      0);
  LibrarySpec noisy;  // default target_noise
  LibrarySpec clean;
  clean.target_noise = 0.0;

  const CandidateLibrary a = pdesel::build_library(field, noisy, 2000, 5);
  const CandidateLibrary b = pdesel::build_library(field, noisy, 2000, 5);
  const CandidateLibrary quiet = pdesel::build_library(field, clean, 2000, 5);

  // Determinism: bitwise identical across repeated builds.
  CHECK((a.matrix.array() == b.matrix.array()).all());
  CHECK((a.target.array() == b.target.array()).all());

  // Noise perturbs only the target; the candidate columns stay exact.
  CHECK((a.matrix.array() == quiet.matrix.array()).all());
  CHECK((a.target.array() != quiet.target.array()).any());

  const Eigen::VectorXd noise = a.target - quiet.target;
  const double clean_rms = std::sqrt(quiet.target.squaredNorm() / 2000.0);
  const double noise_sd = std::sqrt(noise.squaredNorm() / 2000.0);
  CHECK(noise_sd == doctest::Approx(noisy.target_noise * clean_rms).epsilon(0.1));
  CHECK(std::abs(noise.mean()) <= 4.0 * noise_sd / std::sqrt(2000.0));

  // A different seed draws different points.
  const CandidateLibrary other = pdesel::build_library(field, noisy, 2000, 6);
  CHECK((a.matrix.array() != other.matrix.array()).any());
}

TEST_CASE("library: sampling is bounded by the interior point count") {
  const FieldData field = pdesel::simulate_burgers(
      0.1, pdesel::BurgersDomain{-8.0, 8.0, 64, 2.0, 50}, pdesel::InitialCondition::GaussianPulse,
      0);
  const LibrarySpec spec;

  CHECK(pdesel::spatial_margin(3) == 2);
  CHECK(pdesel::spatial_margin(2) == 1);
  CHECK(pdesel::spatial_margin(1) == 1);

  // (64 - 2*2) spatial nodes times (50 - 2) frames.
  const long interior = pdesel::interior_point_count(field, spec);
  CHECK(interior == 60L * 48L);

  CHECK_NOTHROW(pdesel::build_library(field, spec, interior, 0));
  CHECK(code_of([&] { pdesel::build_library(field, spec, interior + 1, 0); }) ==
        ErrorCode::TooFewInteriorPoints);
  CHECK(code_of([&] { pdesel::build_library(field, spec, 0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("library: spec validation rejects unsupported shapes") {
  const FieldData field = pdesel::simulate_burgers(
      0.1, pdesel::BurgersDomain{-8.0, 8.0, 64, 2.0, 50}, pdesel::InitialCondition::GaussianPulse,
      0);

  LibrarySpec bad = LibrarySpec{};
  bad.max_poly_degree = 0;
  CHECK(code_of([&] { pdesel::build_library(field, bad, 100, 0); }) == ErrorCode::InvalidArgument);

  bad = LibrarySpec{};
  bad.max_deriv_order = 4;
  CHECK(code_of([&] { pdesel::build_library(field, bad, 100, 0); }) == ErrorCode::InvalidArgument);

  bad = LibrarySpec{};
  bad.target_noise = -0.1;
  CHECK(code_of([&] { pdesel::build_library(field, bad, 100, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("library: burgers coefficients are recovered on the default pipeline") {
  const FieldData field =
      pdesel::simulate_burgers(0.1, pdesel::BurgersDomain{}, pdesel::InitialCondition::GaussianPulse, 0);
  const CandidateLibrary lib = pdesel::build_library(field, LibrarySpec{}, 10000, 0);
  REQUIRE(lib.n_samples() == 10000);

  const std::vector<int> truth{lib.column_index("u_xx"), lib.column_index("u*u_x")};
  const pdesel::ModelFit fit = pdesel::fit_subset(lib, truth);

  // Support indices are sorted, so coefficient 0 belongs to u_xx.
  CHECK(fit.coefficients(0) == doctest::Approx(0.1).epsilon(0.10));
  CHECK(fit.coefficients(1) == doctest::Approx(-1.0).epsilon(0.10));
}

TEST_CASE("library: the spectral scheme recovers the same dynamics") {
  const FieldData field =
      pdesel::simulate_burgers(0.1, pdesel::BurgersDomain{}, pdesel::InitialCondition::GaussianPulse, 0);
  LibrarySpec spec;
  spec.differentiation = Differentiation::Spectral;
  const CandidateLibrary lib = pdesel::build_library(field, spec, 10000, 0);

  const std::vector<int> truth{lib.column_index("u_xx"), lib.column_index("u*u_x")};
  const pdesel::ModelFit fit = pdesel::fit_subset(lib, truth);
  CHECK(fit.coefficients(0) == doctest::Approx(0.1).epsilon(0.10));
  CHECK(fit.coefficients(1) == doctest::Approx(-1.0).epsilon(0.10));
}

TEST_CASE("library: differentiation schemes parse by name") {
  CHECK(pdesel::parse_differentiation("central_fd") == Differentiation::CentralFd);
  CHECK(pdesel::parse_differentiation("spectral") == Differentiation::Spectral);
  CHECK(std::string(pdesel::to_string(Differentiation::CentralFd)) == "central_fd");
  CHECK(std::string(pdesel::to_string(Differentiation::Spectral)) == "spectral");
  CHECK(code_of([] { pdesel::parse_differentiation("upwind"); }) == ErrorCode::InvalidArgument);
}
