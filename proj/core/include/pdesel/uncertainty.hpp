#pragma once

#include <functional>

#include "pdesel/regression.hpp"

namespace pdesel {

/// Quantified model uncertainty feeding the UBIC penalty: the raw positive
/// value and its nearest-integer image used by the overparameterized-model
/// construction.
struct UncertaintyValue {
  double raw = 1.0;  // > 0 and finite
  int rounded = 1;   // nint(raw), half rounded up
};

/// Nearest integer with halves rounded up (2.5 -> 3). The rounding convention
/// is fixed here because downstream bookkeeping needs one deterministic
/// choice.
int nint(double u);

UncertaintyValue make_uncertainty(double raw);

/// Any model-uncertainty quantifier usable by the sweep; alternatives to the
/// bootstrap default (for example an adaptive scheme) plug in through this
/// signature.
using UncertaintyQuantifier =
    std::function<UncertaintyValue(const ModelFit&, const CandidateLibrary&)>;

/// Default quantifier: one plus the total bootstrap coefficient of variation,
///   raw = 1 + sum_j sd(xi_j^(b)) / |mean_b xi_j^(b)|,
/// over n_boot residual-bootstrap refits with the support held fixed.
/// Residuals (not rows) are resampled so the library matrix stays fixed and
/// the value measures coefficient stability for the given design. Replicate i
/// draws from a stream seeded with seed + i, making the result independent of
/// replicate scheduling. The additive 1 keeps raw >= 1 even for noiseless
/// fits; a noiseless exact fit returns exactly 1.
///
/// Throws UnstableCoefficient when some bootstrap coefficient mean falls below
/// 1e-12 in magnitude (the coefficient of variation is undefined there).
UncertaintyValue quantify_default(const ModelFit& fit, const CandidateLibrary& lib, int n_boot,
                                  unsigned long long seed);

}  // namespace pdesel
