#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdesel/criteria.hpp"
#include "pdesel/equivalence.hpp"
#include "pdesel/regression.hpp"
#include "pdesel/uncertainty.hpp"

namespace pdesel {

/// One ICOMP informativeness setting: a fixed positive number, or log(N)
/// resolved against the library's sample count at scoring time.
struct AnSetting {
  bool use_log_n = false;
  double value = 1.0;  // ignored when use_log_n

  double resolve(long n) const;
  /// "log_n" or the number rendered with %g; used in CSV headers and JSON.
  std::string label() const;
};

AnSetting an_number(double value);
AnSetting an_log_n();
/// Accepts "log_n" or a decimal literal; throws InvalidArgument otherwise.
AnSetting parse_an(const std::string& token);

struct SweepConfig {
  int max_size = 8;
  std::vector<AnSetting> a_n_schedule = {an_number(1.0), an_log_n()};
  int n_boot = 200;
  unsigned long long seed = 0;
  /// Per-size search; when unset, exhaustive for libraries of up to 16 terms
  /// and forward selection beyond that.
  std::optional<SubsetStrategy> strategy;
  /// Model-uncertainty quantifier; the bootstrap default when empty. The row
  /// for size k quantifies with seed + k so rows stay independent.
  UncertaintyQuantifier quantifier;
};

/// Everything recorded for one support size. When `failed` is set only `size`
/// and `error` are meaningful; a failed row never aborts the sweep.
struct SweepRow {
  int size = 0;
  bool failed = false;
  std::string error;

  ModelFit fit;
  UncertaintyValue uncertainty;
  CriterionScore bic_score;
  CriterionScore ubic_score;
  std::vector<CriterionScore> icomp_scores;  // aligned with the a_n schedule
  ComplexityReport complexity;               // C of the estimated IFIM inverse

  /// Equivalence verification of this row's model at its quantified
  /// uncertainty; absent (with the reason) when the construction does not
  /// apply, e.g. a vanishing intercept.
  std::optional<EquivalenceReport> equivalence;
  std::string equivalence_error;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sizes 1..max_size in order
  std::vector<AnSetting> a_n_schedule;

  // Indices into rows (-1 when no row could be scored); ties resolve to the
  // smaller support size.
  int best_bic = -1;
  int best_ubic = -1;
  std::vector<int> best_icomp;  // one per schedule entry

  /// Whether C was nondecreasing in k across the scored rows; an observation
  /// about the run, reported rather than enforced.
  bool complexity_nondecreasing = false;

  const SweepRow& row_for(int index) const { return rows.at(static_cast<size_t>(index)); }
};

/// Scores the best model of each support size 1..max_size under BIC, UBIC and
/// every scheduled ICOMP setting, quantifying uncertainty and verifying the
/// augmented-model equivalence per row. Errors from sub-steps are caught per
/// row and recorded on it.
SweepResult discovery_sweep(const CandidateLibrary& lib, const SweepConfig& config);

/// JSON document: {"a_n_schedule", "rows": [per-size records], "selection",
/// "complexity_nondecreasing"}.
std::string sweep_json(const SweepResult& result, const CandidateLibrary& lib);

/// Support-size sweep of relative ICOMP, one column per scheduled a_N
/// (header: support_size,rel_icomp_an_<label>,...). Failed rows are omitted.
void write_fig1_csv(const SweepResult& result, const std::string& path);

/// Support size against the complexity of the estimated IFIM inverse
/// (header: support_size,complexity).
void write_fig2_csv(const SweepResult& result, const std::string& path);

/// Renders a fitted model as an equation, e.g.
/// "u_t = -0.9946*u*u_x + 0.09913*u_xx". The intercept is appended as a
/// trailing constant when its magnitude reaches 1e-6.
std::string render_pde_string(const ModelFit& fit, const CandidateLibrary& lib);

}  // namespace pdesel
