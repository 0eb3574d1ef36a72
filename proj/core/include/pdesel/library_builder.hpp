#pragma once

#include "pdesel/candidate_library.hpp"
#include "pdesel/field.hpp"

namespace pdesel {

enum class Differentiation { CentralFd, Spectral };

Differentiation parse_differentiation(const std::string& name);
const char* to_string(Differentiation scheme) noexcept;

/// Composition of the candidate library: every product u^a * d^b u / dx^b for
/// a in 0..max_poly_degree and b in 0..max_deriv_order, with the (0, 0) slot
/// entering as an explicit constant column named "1". The default 3 x 3 spec
/// therefore yields 16 candidate terms.
///
/// target_noise models observation error on the time-derivative samples: iid
/// Gaussian noise with standard deviation target_noise * RMS(u_t) is added to
/// the target (never to the candidate columns, whose stencil evaluations stay
/// exact). Without it, simulated data is self-consistent to truncation error,
/// which larger supports can fit almost freely — the likelihood then rewards
/// every added term far beyond any criterion's penalty and model selection
/// degenerates to "biggest support wins". The relative scaling leaves
/// identically-zero targets untouched.
struct LibrarySpec {
  int max_poly_degree = 3;
  int max_deriv_order = 3;
  Differentiation differentiation = Differentiation::CentralFd;
  double target_noise = 0.4;

  int n_terms() const { return (max_poly_degree + 1) * (max_deriv_order + 1); }
};

/// Name of the term u^a * d^b u ("1", "u_xx", "u^2*u_x", ...).
std::string term_name(int poly_degree, int deriv_order);

/// d^b u / dx^b on the full grid, second-order central stencils. Entries
/// within the stencil margin of the spatial boundary are left zero; use
/// spatial_margin to know how wide that band is.
Eigen::MatrixXd spatial_derivative(const FieldData& field, int order, Differentiation scheme);

/// du/dt on the full grid by central differences in time; the first and last
/// frames are left zero.
Eigen::MatrixXd time_derivative(const FieldData& field);

/// Width of the spatial boundary band excluded from sampling. Spectral
/// derivatives are defined everywhere, but the same band is excluded under
/// both schemes so the sampling domain does not depend on the scheme.
int spatial_margin(int max_deriv_order);

/// Number of grid points eligible for sampling under `spec`.
long interior_point_count(const FieldData& field, const LibrarySpec& spec);

/// Evaluates every candidate term and the time-derivative target at
/// n_samples interior grid points drawn uniformly at random without
/// replacement (deterministic in `seed`). Throws TooFewInteriorPoints when
/// the interior cannot supply n_samples distinct points.
CandidateLibrary build_library(const FieldData& field, const LibrarySpec& spec, long n_samples,
                               unsigned long long seed);

}  // namespace pdesel
