#include "pdesel/library_builder.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "pdesel/error.hpp"
#include "pdesel/rng.hpp"

namespace pdesel {

Differentiation parse_differentiation(const std::string& name) {
  if (name == "central_fd") return Differentiation::CentralFd;
  if (name == "spectral") return Differentiation::Spectral;
  throw Error(ErrorCode::InvalidArgument, "unknown differentiation scheme '" + name +
                                              "' (expected central_fd or spectral)");
}

const char* to_string(Differentiation scheme) noexcept {
  switch (scheme) {
    case Differentiation::CentralFd:
      return "central_fd";
    case Differentiation::Spectral:
      return "spectral";
  }
  return "?";
}

std::string term_name(int poly_degree, int deriv_order) {
  if (poly_degree == 0 && deriv_order == 0) return "1";
  std::string poly;
  if (poly_degree == 1) {
    poly = "u";
  } else if (poly_degree > 1) {
    poly = "u^" + std::to_string(poly_degree);
  }
  std::string deriv;
  if (deriv_order > 0) {
    deriv = "u_" + std::string(static_cast<size_t>(deriv_order), 'x');
  }
  if (poly.empty()) return deriv;
  if (deriv.empty()) return poly;
  return poly + "*" + deriv;
}

namespace {

// Second-order central stencils on a non-periodic read of the grid; the
// boundary band that the stencil cannot reach stays zero and is excluded from
// sampling via spatial_margin.
void central_fd_column(const Eigen::VectorXd& u, int order, double dx, Eigen::VectorXd& out) {
  const Eigen::Index n = u.size();
  out.setZero(n);
  switch (order) {
    case 1:
      for (Eigen::Index i = 1; i + 1 < n; ++i) out(i) = (u(i + 1) - u(i - 1)) / (2.0 * dx);
      break;
    case 2:
      for (Eigen::Index i = 1; i + 1 < n; ++i)
        out(i) = (u(i + 1) - 2.0 * u(i) + u(i - 1)) / (dx * dx);
      break;
    case 3:
      for (Eigen::Index i = 2; i + 2 < n; ++i)
        out(i) = (u(i + 2) - 2.0 * u(i + 1) + 2.0 * u(i - 1) - u(i - 2)) / (2.0 * dx * dx * dx);
      break;
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "central differences implemented for orders 1..3, got " + std::to_string(order));
  }
}

// Differentiates every time slice by multiplying Fourier modes with (i k)^order
// on the periodic domain of length n*dx. For odd orders the Nyquist mode of an
// even-length grid carries no usable sign information and is zeroed.
Eigen::MatrixXd spectral_derivative(const FieldData& field, int order) {
  const int n = static_cast<int>(field.n_x());
  const double length = static_cast<double>(n) * field.dx();
  const int n_freq = n / 2 + 1;

  std::vector<double> real(static_cast<size_t>(n));
  std::vector<std::complex<double>> freq(static_cast<size_t>(n_freq));
  fftw_plan forward = fftw_plan_dft_r2c_1d(
      n, real.data(), reinterpret_cast<fftw_complex*>(freq.data()), FFTW_ESTIMATE);
  fftw_plan inverse = fftw_plan_dft_c2r_1d(
      n, reinterpret_cast<fftw_complex*>(freq.data()), real.data(), FFTW_ESTIMATE);

  Eigen::MatrixXd result(field.n_x(), field.n_t());
  for (Eigen::Index j = 0; j < field.n_t(); ++j) {
    for (int i = 0; i < n; ++i) real[static_cast<size_t>(i)] = field.u(i, j);
    fftw_execute(forward);
    for (int m = 0; m < n_freq; ++m) {
      const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
      const std::complex<double> ik(0.0, k);
      freq[static_cast<size_t>(m)] *= std::pow(ik, order);
    }
    if (order % 2 == 1 && n % 2 == 0) freq[static_cast<size_t>(n_freq - 1)] = 0.0;
    fftw_execute(inverse);
    for (int i = 0; i < n; ++i)
      result(i, j) = real[static_cast<size_t>(i)] / static_cast<double>(n);
  }
  fftw_destroy_plan(forward);
  fftw_destroy_plan(inverse);
  return result;
}

}  // namespace

Eigen::MatrixXd spatial_derivative(const FieldData& field, int order, Differentiation scheme) {
  field.validate();
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
  if (order == 0) return field.u;
  if (scheme == Differentiation::Spectral) return spectral_derivative(field, order);

  Eigen::MatrixXd result(field.n_x(), field.n_t());
  Eigen::VectorXd column;
  for (Eigen::Index j = 0; j < field.n_t(); ++j) {
    central_fd_column(field.u.col(j), order, field.dx(), column);
    result.col(j) = column;
  }
  return result;
}

Eigen::MatrixXd time_derivative(const FieldData& field) {
  field.validate();
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(field.n_x(), field.n_t());
  const double dt = field.dt();
  for (Eigen::Index j = 1; j + 1 < field.n_t(); ++j)
    result.col(j) = (field.u.col(j + 1) - field.u.col(j - 1)) / (2.0 * dt);
  return result;
}

int spatial_margin(int max_deriv_order) {
  // Widest central stencil reaches two points out (third derivative); lower
  // orders only need one.
  return max_deriv_order >= 3 ? 2 : 1;
}

long interior_point_count(const FieldData& field, const LibrarySpec& spec) {
  const long mx = spatial_margin(spec.max_deriv_order);
  const long mt = 1;  // central time derivative
  const long nx = static_cast<long>(field.n_x()) - 2 * mx;
  const long nt = static_cast<long>(field.n_t()) - 2 * mt;
  if (nx <= 0 || nt <= 0) return 0;
  return nx * nt;
}

CandidateLibrary build_library(const FieldData& field, const LibrarySpec& spec, long n_samples,
                               unsigned long long seed) {
  field.validate();
  if (spec.max_poly_degree < 1 || spec.max_deriv_order < 1)
    throw Error(ErrorCode::InvalidArgument, "library spec needs degree >= 1 and order >= 1");
  if (spec.max_deriv_order > 3)
    throw Error(ErrorCode::InvalidArgument, "derivative orders above 3 are not implemented");
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (!(spec.target_noise >= 0.0) || !std::isfinite(spec.target_noise))
    throw Error(ErrorCode::InvalidArgument, "target_noise must be finite and >= 0");

  const long interior = interior_point_count(field, spec);
  if (n_samples > interior)
    throw Error(ErrorCode::TooFewInteriorPoints,
                "requested " + std::to_string(n_samples) + " samples but only " +
                    std::to_string(interior) + " interior grid points are available");

  // Evaluate each derivative once on the full grid; the time derivative is
  // always the second-order central difference regardless of the spatial
  // scheme, because the target does not enter the spatial library.
  std::vector<Eigen::MatrixXd> deriv(static_cast<size_t>(spec.max_deriv_order) + 1);
  for (int b = 1; b <= spec.max_deriv_order; ++b)
    deriv[static_cast<size_t>(b)] = spatial_derivative(field, b, spec.differentiation);
  const Eigen::MatrixXd u_t = time_derivative(field);

  // Partial Fisher-Yates over the flattened interior index set: element i is
  // swapped with a uniformly chosen element of [i, interior), giving the
  // first n_samples entries of a uniform permutation. Modulo reduction keeps
  // the draw identical across standard-library implementations.
  const long mx = spatial_margin(spec.max_deriv_order);
  const long mt = 1;
  const long nx = static_cast<long>(field.n_x()) - 2 * mx;
  std::vector<long> pool(static_cast<size_t>(interior));
  for (long i = 0; i < interior; ++i) pool[static_cast<size_t>(i)] = i;
  std::mt19937_64 rng(seed);
  for (long i = 0; i < n_samples; ++i) {
    const long j = i + static_cast<long>(rng() % static_cast<unsigned long long>(interior - i));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }

  const int m = spec.n_terms();
  Eigen::MatrixXd matrix(n_samples, m);
  Eigen::VectorXd target(n_samples);
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(m));
  for (int a = 0; a <= spec.max_poly_degree; ++a)
    for (int b = 0; b <= spec.max_deriv_order; ++b) names.push_back(term_name(a, b));

  for (long s = 0; s < n_samples; ++s) {
    const long flat = pool[static_cast<size_t>(s)];
    const Eigen::Index ix = static_cast<Eigen::Index>(mx + flat % nx);
    const Eigen::Index it = static_cast<Eigen::Index>(mt + flat / nx);
    const double u = field.u(ix, it);
    int col = 0;
    double power = 1.0;  // u^a, built up incrementally
    for (int a = 0; a <= spec.max_poly_degree; ++a) {
      // The b = 0 slot is the pure polynomial u^a (constant 1 when a = 0);
      // derivatives only enter for b >= 1.
      matrix(s, col++) = power;
      for (int b = 1; b <= spec.max_deriv_order; ++b)
        matrix(s, col++) = power * deriv[static_cast<size_t>(b)](ix, it);
      power *= u;
    }
    target(s) = u_t(ix, it);
  }

  // Observation noise on the target; the rng stream simply continues past the
  // sampling draws, so the whole library is a pure function of (field, spec,
  // n_samples, seed).
  if (spec.target_noise > 0.0) {
    const double sigma =
        spec.target_noise * std::sqrt(target.squaredNorm() / static_cast<double>(n_samples));
    for (long s = 0; s < n_samples; ++s) target(s) += sigma * rng::normal(rng);
  }

  CandidateLibrary lib(std::move(matrix), std::move(names), std::move(target));
  lib.validate();
  return lib;
}

}  // namespace pdesel
