#include "pdesel/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "pdesel/error.hpp"

namespace pdesel {

namespace {

std::string format_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

double AnSetting::resolve(long n) const {
  if (use_log_n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "log(N) needs N >= 2");
    return std::log(static_cast<double>(n));
  }
  return value;
}

std::string AnSetting::label() const { return use_log_n ? "log_n" : format_g(value); }

AnSetting an_number(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "a_n must be positive and finite");
  }
  AnSetting s;
  s.value = value;
  return s;
}

AnSetting an_log_n() {
  AnSetting s;
  s.use_log_n = true;
  return s;
}

AnSetting parse_an(const std::string& token) {
  if (token == "log_n") return an_log_n();
  size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != token.size() || token.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "a_n entry '" + token + "' is neither a number nor log_n");
  }
  return an_number(value);
}

SweepResult discovery_sweep(const CandidateLibrary& lib, const SweepConfig& config) {
  lib.validate();
  if (config.max_size < 1 || config.max_size > lib.n_terms()) {
    throw Error(ErrorCode::InvalidArgument,
                "max_size must lie in [1, " + std::to_string(lib.n_terms()) + "]");
  }
  if (config.a_n_schedule.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a_n schedule must not be empty");
  }

  const SubsetStrategy strategy = config.strategy.value_or(
      lib.n_terms() <= 16 ? SubsetStrategy::Exhaustive : SubsetStrategy::Forward);

  SweepResult result;
  result.a_n_schedule = config.a_n_schedule;
  result.best_icomp.assign(config.a_n_schedule.size(), -1);

  for (int k = 1; k <= config.max_size; ++k) {
    SweepRow row;
    row.size = k;
    try {
      row.fit = best_subset_of_size(lib, k, strategy);
      row.uncertainty =
          config.quantifier
              ? config.quantifier(row.fit, lib)
              : quantify_default(row.fit, lib, config.n_boot,
                                 config.seed + static_cast<unsigned long long>(k));
      row.bic_score = bic(row.fit);
      row.ubic_score = ubic(row.fit, row.uncertainty.raw);
      row.complexity = max_info_complexity(estimate_ifim_inverse(row.fit, lib));
      for (const AnSetting& setting : config.a_n_schedule) {
        row.icomp_scores.push_back(icomp(row.fit, lib, setting.resolve(row.fit.n_samples)));
      }
      try {
        row.equivalence = verify_identity(row.fit, lib, row.uncertainty);
      } catch (const Error& e) {
        row.equivalence_error = e.what();
      }
    } catch (const Error& e) {
      row = SweepRow{};
      row.size = k;
      row.failed = true;
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }

  auto better = [&](double candidate, int current_best, double best_total) {
    return current_best < 0 || candidate < best_total;
  };
  double best_bic_total = 0.0, best_ubic_total = 0.0;
  std::vector<double> best_icomp_total(config.a_n_schedule.size(), 0.0);
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (row.failed) continue;
    if (better(row.bic_score.total, result.best_bic, best_bic_total)) {
      result.best_bic = static_cast<int>(i);
      best_bic_total = row.bic_score.total;
    }
    if (better(row.ubic_score.total, result.best_ubic, best_ubic_total)) {
      result.best_ubic = static_cast<int>(i);
      best_ubic_total = row.ubic_score.total;
    }
    for (size_t a = 0; a < row.icomp_scores.size(); ++a) {
      if (better(row.icomp_scores[a].total, result.best_icomp[a], best_icomp_total[a])) {
        result.best_icomp[a] = static_cast<int>(i);
        best_icomp_total[a] = row.icomp_scores[a].total;
      }
    }
  }

  result.complexity_nondecreasing = true;
  double previous = -std::numeric_limits<double>::infinity();
  for (const SweepRow& row : result.rows) {
    if (row.failed) continue;
    if (row.complexity.value < previous - 1e-9 * std::max(1.0, std::abs(previous))) {
      result.complexity_nondecreasing = false;
    }
    previous = row.complexity.value;
  }
  return result;
}

namespace {

nlohmann::json support_names_json(const std::vector<int>& support, const CandidateLibrary& lib) {
  nlohmann::json names = nlohmann::json::array();
  for (int j : support) names.push_back(lib.column_names[static_cast<size_t>(j)]);
  return names;
}

nlohmann::json selection_json(const SweepResult& result, const CandidateLibrary& lib, int index,
                              double total) {
  if (index < 0) return nullptr;
  const SweepRow& row = result.row_for(index);
  return nlohmann::json{{"size", row.size},
                        {"support", row.fit.support},
                        {"support_names", support_names_json(row.fit.support, lib)},
                        {"total", total}};
}

}  // namespace

std::string sweep_json(const SweepResult& result, const CandidateLibrary& lib) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : result.rows) {
    if (row.failed) {
      rows.push_back({{"size", row.size}, {"failed", true}, {"error", row.error}});
      continue;
    }
    nlohmann::json icomp = nlohmann::json::array();
    for (size_t a = 0; a < row.icomp_scores.size(); ++a) {
      nlohmann::json entry = nlohmann::json::parse(criterion_score_json(row.icomp_scores[a]));
      entry["a_n_label"] = result.a_n_schedule[a].label();
      icomp.push_back(entry);
    }
    nlohmann::json coefficients = nlohmann::json::array();
    for (Eigen::Index j = 0; j < row.fit.coefficients.size(); ++j) {
      coefficients.push_back(row.fit.coefficients(j));
    }
    nlohmann::json record{
        {"size", row.size},
        {"failed", false},
        {"support", row.fit.support},
        {"support_names", support_names_json(row.fit.support, lib)},
        {"coefficients", coefficients},
        {"intercept", row.fit.intercept},
        {"rss", row.fit.rss},
        {"log_likelihood", row.fit.log_likelihood},
        {"uncertainty", {{"raw", row.uncertainty.raw}, {"rounded", row.uncertainty.rounded}}},
        {"bic", nlohmann::json::parse(criterion_score_json(row.bic_score))},
        {"ubic", nlohmann::json::parse(criterion_score_json(row.ubic_score))},
        {"icomp", icomp},
        {"complexity",
         {{"value", row.complexity.value},
          {"trace", row.complexity.trace},
          {"log_det", row.complexity.log_det},
          {"dim", row.complexity.dim}}},
    };
    if (row.equivalence) {
      record["equivalence"] = nlohmann::json::parse(equivalence_report_json(*row.equivalence));
    } else {
      record["equivalence"] = nullptr;
      record["equivalence_error"] = row.equivalence_error;
    }
    rows.push_back(record);
  }

  nlohmann::json schedule = nlohmann::json::array();
  for (const AnSetting& s : result.a_n_schedule) schedule.push_back(s.label());

  nlohmann::json icomp_selection = nlohmann::json::array();
  for (size_t a = 0; a < result.best_icomp.size(); ++a) {
    const int idx = result.best_icomp[a];
    nlohmann::json entry =
        idx < 0 ? nlohmann::json(nullptr)
                : selection_json(result, lib, idx, result.row_for(idx).icomp_scores[a].total);
    if (!entry.is_null()) entry["a_n_label"] = result.a_n_schedule[a].label();
    icomp_selection.push_back(entry);
  }
  nlohmann::json bic_sel =
      result.best_bic < 0
          ? nlohmann::json(nullptr)
          : selection_json(result, lib, result.best_bic,
                           result.row_for(result.best_bic).bic_score.total);
  nlohmann::json ubic_sel =
      result.best_ubic < 0
          ? nlohmann::json(nullptr)
          : selection_json(result, lib, result.best_ubic,
                           result.row_for(result.best_ubic).ubic_score.total);

  nlohmann::json doc{
      {"a_n_schedule", schedule},
      {"rows", rows},
      {"selection", {{"bic", bic_sel}, {"ubic", ubic_sel}, {"icomp", icomp_selection}}},
      {"complexity_nondecreasing", result.complexity_nondecreasing},
  };
  return doc.dump(2) + "\n";
}

void write_fig1_csv(const SweepResult& result, const std::string& path) {
  // Relative scores are computed per schedule entry across the scored rows.
  std::vector<std::vector<double>> rel(result.a_n_schedule.size());
  std::vector<int> sizes;
  for (size_t a = 0; a < result.a_n_schedule.size(); ++a) {
    std::vector<CriterionScore> scores;
    for (const SweepRow& row : result.rows) {
      if (!row.failed) scores.push_back(row.icomp_scores[a]);
    }
    rel[a] = relative_scores(scores);
  }
  for (const SweepRow& row : result.rows) {
    if (!row.failed) sizes.push_back(row.size);
  }

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << "support_size";
  for (const AnSetting& s : result.a_n_schedule) out << ",rel_icomp_an_" << s.label();
  out << "\n";
  for (size_t i = 0; i < sizes.size(); ++i) {
    out << sizes[i];
    for (size_t a = 0; a < rel.size(); ++a) out << ',' << format_full(rel[a][i]);
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

void write_fig2_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << "support_size,complexity\n";
  for (const SweepRow& row : result.rows) {
    if (row.failed) continue;
    out << row.size << ',' << format_full(row.complexity.value) << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::string render_pde_string(const ModelFit& fit, const CandidateLibrary& lib) {
  char buf[64];
  std::string s = "u_t =";
  bool first = true;
  auto append_term = [&](double coefficient, const std::string& name) {
    const char* sign = coefficient < 0.0 ? "-" : "+";
    std::snprintf(buf, sizeof(buf), "%.4g", std::abs(coefficient));
    if (first) {
      s += coefficient < 0.0 ? " -" : " ";
      first = false;
    } else {
      s += " ";
      s += sign;
      s += " ";
    }
    s += buf;
    if (!name.empty()) {
      s += "*";
      s += name;
    }
  };
  for (size_t j = 0; j < fit.support.size(); ++j) {
    append_term(fit.coefficients(static_cast<Eigen::Index>(j)),
                lib.column_names[static_cast<size_t>(fit.support[j])]);
  }
  if (std::abs(fit.intercept) >= 1e-6 || fit.support.empty()) {
    append_term(fit.intercept, "");
  }
  return s;
}

}  // namespace pdesel
