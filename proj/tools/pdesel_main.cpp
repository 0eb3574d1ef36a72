// pdesel: command-line front end for the model-selection toolkit.
//
// Commands: simulate, build-library, discover, verify-equivalence, scan-an.
// A JSON config file supplies any parameter not given on the command line;
// precedence is CLI > file > defaults. Exit codes: 0 success, 1 runtime/data
// error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdesel/candidate_library.hpp"
#include "pdesel/criteria.hpp"
#include "pdesel/equivalence.hpp"
#include "pdesel/error.hpp"
#include "pdesel/field.hpp"
#include "pdesel/library_builder.hpp"
#include "pdesel/regression.hpp"
#include "pdesel/rng.hpp"
#include "pdesel/sweep.hpp"
#include "pdesel/uncertainty.hpp"

namespace {

using nlohmann::json;

/// Bad input detected after flag parsing (config-file values included).
struct UsageError {
  std::string message;
};

struct RunConfig {
  // simulation
  double nu = 0.1;
  double x_min = -8.0;
  double x_max = 8.0;
  int n_x = 256;
  double t_max = 10.0;
  int n_t = 101;
  std::string initial = "gaussian_pulse";
  // library
  std::string field_path;
  std::string library_path;
  int poly_degree = 3;
  int deriv_order = 3;
  std::string differentiation = "central_fd";
  double target_noise = pdesel::LibrarySpec{}.target_noise;
  long n_samples = 10000;
  // sweep / scan
  int max_size = 8;
  int n_boot = 200;
  std::vector<std::string> a_n_schedule = {"1", "log_n"};
  std::vector<std::string> oracle = {"u*u_x", "u_xx"};
  // equivalence battery
  int instances = 200;
  double perturb = 0.0;
  // global
  unsigned long long seed = 0;
  std::string out = "out";
  bool json_output = false;
};

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw pdesel::Error(pdesel::ErrorCode::IoError, "cannot open config file '" + path + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw pdesel::Error(pdesel::ErrorCode::IoError,
                        "config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw pdesel::Error(pdesel::ErrorCode::IoError,
                        "config file '" + path + "' must hold a JSON object");
  }
  return doc;
}

bool option_given(const CLI::App* app, const std::string& flag) {
  const CLI::Option* opt = app->get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

/// Folds config-file values into `cfg` for every parameter the command line
/// left untouched. Unknown keys are rejected so typos cannot silently fall
/// back to defaults.
void fold_config_file(const json& file, const CLI::App& app, const CLI::App* cmd, RunConfig& cfg) {
  static const std::vector<std::string> known = {
      "nu",         "x_min",    "x_max",           "n_x",       "t_max",
      "n_t",        "initial",  "field",           "library",   "poly_degree",
      "deriv_order", "differentiation", "target_noise", "n_samples", "max_size",
      "n_boot",     "a_n_schedule", "oracle",      "instances", "perturb",
      "seed",       "out"};
  for (const auto& [key, value] : file.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw UsageError{"unknown config key '" + key + "'"};
    }
    (void)value;
  }

  auto given = [&](const std::string& flag) {
    return option_given(&app, flag) || option_given(cmd, flag);
  };
  auto fold = [&](const char* key, const std::string& flag, auto& target) {
    using T = std::decay_t<decltype(target)>;
    if (file.contains(key) && !given(flag)) {
      try {
        target = file.at(key).get<T>();
      } catch (const json::exception&) {
        throw UsageError{std::string("config key '") + key + "' has the wrong type"};
      }
    }
  };

  fold("nu", "--nu", cfg.nu);
  fold("x_min", "--x-min", cfg.x_min);
  fold("x_max", "--x-max", cfg.x_max);
  fold("n_x", "--nx", cfg.n_x);
  fold("t_max", "--t-max", cfg.t_max);
  fold("n_t", "--nt", cfg.n_t);
  fold("initial", "--initial", cfg.initial);
  fold("field", "--field", cfg.field_path);
  fold("library", "--library", cfg.library_path);
  fold("poly_degree", "--poly-degree", cfg.poly_degree);
  fold("deriv_order", "--deriv-order", cfg.deriv_order);
  fold("differentiation", "--differentiation", cfg.differentiation);
  fold("target_noise", "--target-noise", cfg.target_noise);
  fold("n_samples", "--samples", cfg.n_samples);
  fold("max_size", "--max-size", cfg.max_size);
  fold("n_boot", "--n-boot", cfg.n_boot);
  fold("instances", "--instances", cfg.instances);
  fold("perturb", "--perturb", cfg.perturb);
  fold("seed", "--seed", cfg.seed);
  fold("out", "--out", cfg.out);
  fold("oracle", "--oracle", cfg.oracle);

  // Schedule entries may be numbers or strings in the file; normalize to the
  // string form parse_an understands.
  if (file.contains("a_n_schedule") && !given("--an")) {
    if (!file.at("a_n_schedule").is_array()) {
      throw UsageError{"config key 'a_n_schedule' must be an array"};
    }
    cfg.a_n_schedule.clear();
    for (const json& entry : file.at("a_n_schedule")) {
      cfg.a_n_schedule.push_back(entry.is_string() ? entry.get<std::string>() : entry.dump());
    }
  }
}

std::string out_path(const RunConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.out) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) {
    throw pdesel::Error(pdesel::ErrorCode::IoError,
                        "cannot create output directory '" + cfg.out + "': " + ec.message());
  }
}

std::string format_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Parameter validation (usage errors, exit code 2)

void validate_simulation_params(const RunConfig& cfg) {
  if (!(cfg.nu > 0.0) || !std::isfinite(cfg.nu)) throw UsageError{"--nu must be positive"};
  if (cfg.n_x < 64) throw UsageError{"--nx must be at least 64"};
  if (cfg.n_t < 50) throw UsageError{"--nt must be at least 50"};
  if (!(cfg.x_max > cfg.x_min)) throw UsageError{"--x-max must exceed --x-min"};
  if (!(cfg.t_max > 0.0)) throw UsageError{"--t-max must be positive"};
  try {
    pdesel::parse_initial_condition(cfg.initial);
  } catch (const pdesel::Error& e) {
    throw UsageError{e.what()};
  }
}

void validate_library_params(const RunConfig& cfg) {
  if (cfg.poly_degree < 1) throw UsageError{"--poly-degree must be at least 1"};
  if (cfg.deriv_order < 1 || cfg.deriv_order > 3) {
    throw UsageError{"--deriv-order must lie in [1, 3]"};
  }
  if (cfg.n_samples < 1) throw UsageError{"--samples must be positive"};
  if (!(cfg.target_noise >= 0.0) || !std::isfinite(cfg.target_noise)) {
    throw UsageError{"--target-noise must be finite and >= 0"};
  }
  try {
    pdesel::parse_differentiation(cfg.differentiation);
  } catch (const pdesel::Error& e) {
    throw UsageError{e.what()};
  }
}

std::vector<pdesel::AnSetting> parse_schedule(const RunConfig& cfg) {
  if (cfg.a_n_schedule.empty()) throw UsageError{"--an schedule must not be empty"};
  std::vector<pdesel::AnSetting> schedule;
  for (const std::string& token : cfg.a_n_schedule) {
    try {
      schedule.push_back(pdesel::parse_an(token));
    } catch (const pdesel::Error& e) {
      throw UsageError{e.what()};
    }
  }
  return schedule;
}

// ---------------------------------------------------------------------------
// Shared pipeline stages

pdesel::FieldData obtain_field(const RunConfig& cfg) {
  if (!cfg.field_path.empty()) return pdesel::read_field_csv(cfg.field_path);
  validate_simulation_params(cfg);
  pdesel::BurgersDomain domain;
  domain.x_min = cfg.x_min;
  domain.x_max = cfg.x_max;
  domain.n_x = cfg.n_x;
  domain.t_max = cfg.t_max;
  domain.n_t = cfg.n_t;
  return pdesel::simulate_burgers(cfg.nu, domain, pdesel::parse_initial_condition(cfg.initial),
                                  cfg.seed);
}

pdesel::CandidateLibrary obtain_library(const RunConfig& cfg) {
  if (!cfg.library_path.empty()) return pdesel::read_library_csv(cfg.library_path);
  validate_library_params(cfg);
  pdesel::LibrarySpec spec;
  spec.max_poly_degree = cfg.poly_degree;
  spec.max_deriv_order = cfg.deriv_order;
  spec.differentiation = pdesel::parse_differentiation(cfg.differentiation);
  spec.target_noise = cfg.target_noise;
  return pdesel::build_library(obtain_field(cfg), spec, cfg.n_samples, cfg.seed);
}

// ---------------------------------------------------------------------------
// Commands

int run_simulate(const RunConfig& cfg) {
  validate_simulation_params(cfg);
  const pdesel::FieldData field = obtain_field(cfg);
  ensure_out_dir(cfg);
  const std::string csv = out_path(cfg, "field.csv");
  const std::string meta = out_path(cfg, "field_meta.json");
  pdesel::write_field_csv(field, csv);
  pdesel::write_field_sidecar(field, cfg.nu, cfg.seed, meta);
  if (cfg.json_output) {
    std::ifstream in(meta);
    std::cout << in.rdbuf();
  } else {
    std::cout << "wrote " << csv << " (" << field.n_x() << "x" << field.n_t() << " grid) and "
              << meta << "\n";
  }
  return 0;
}

int run_build_library(const RunConfig& cfg) {
  validate_library_params(cfg);
  const pdesel::CandidateLibrary lib = obtain_library(cfg);
  ensure_out_dir(cfg);
  const std::string csv = out_path(cfg, "library.csv");
  pdesel::write_library_csv(lib, csv);
  if (cfg.json_output) {
    json doc{{"path", csv},
             {"n_samples", static_cast<long>(lib.n_samples())},
             {"n_terms", static_cast<long>(lib.n_terms())},
             {"column_names", lib.column_names}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wrote " << csv << " (" << lib.n_samples() << " samples x " << lib.n_terms()
              << " terms)\n";
  }
  return 0;
}

std::string support_name_set(const std::vector<int>& support, const pdesel::CandidateLibrary& lib) {
  std::string s = "{";
  for (size_t i = 0; i < support.size(); ++i) {
    if (i > 0) s += ", ";
    s += lib.column_names[static_cast<size_t>(support[i])];
  }
  return s + "}";
}

int run_discover(const RunConfig& cfg) {
  pdesel::SweepConfig sweep_config;
  sweep_config.a_n_schedule = parse_schedule(cfg);
  if (cfg.max_size < 1) throw UsageError{"--max-size must be at least 1"};
  if (cfg.n_boot < 10) throw UsageError{"--n-boot must be at least 10"};
  sweep_config.max_size = cfg.max_size;
  sweep_config.n_boot = cfg.n_boot;
  sweep_config.seed = cfg.seed;

  const pdesel::CandidateLibrary lib = obtain_library(cfg);
  const pdesel::SweepResult result = pdesel::discovery_sweep(lib, sweep_config);

  ensure_out_dir(cfg);
  const std::string sweep_path = out_path(cfg, "sweep.json");
  {
    std::ofstream out(sweep_path);
    if (!out) {
      throw pdesel::Error(pdesel::ErrorCode::IoError,
                          "cannot open '" + sweep_path + "' for writing");
    }
    out << pdesel::sweep_json(result, lib);
  }
  pdesel::write_fig1_csv(result, out_path(cfg, "fig1.csv"));
  pdesel::write_fig2_csv(result, out_path(cfg, "fig2.csv"));

  if (cfg.json_output) {
    std::cout << pdesel::sweep_json(result, lib);
    return 0;
  }

  auto print_selection = [&](const std::string& label, int index) {
    std::cout << label << " selection ";
    if (index < 0) {
      std::cout << "unavailable (no scored rows)\n";
      return;
    }
    const pdesel::SweepRow& row = result.row_for(index);
    std::cout << support_name_set(row.fit.support, lib) << ": "
              << pdesel::render_pde_string(row.fit, lib) << "\n";
  };
  print_selection("BIC", result.best_bic);
  print_selection("UBIC", result.best_ubic);
  for (size_t a = 0; a < result.a_n_schedule.size(); ++a) {
    print_selection("ICOMP[a_n=" + result.a_n_schedule[a].label() + "]", result.best_icomp[a]);
  }
  if (!result.complexity_nondecreasing) {
    std::cout << "note: complexity was not nondecreasing in support size on this run\n";
  }
  std::cout << "wrote " << sweep_path << ", " << out_path(cfg, "fig1.csv") << ", "
            << out_path(cfg, "fig2.csv") << "\n";
  return 0;
}

// --- verify-equivalence ------------------------------------------------------

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * pdesel::rng::uniform01(rng);
}
long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

/// One randomized equivalence instance: a Gaussian random library with a
/// planted linear model plus noise, a random support fit, and an integer
/// uncertainty in [1, 5].
pdesel::EquivalenceReport equivalence_instance(unsigned long long seed, double perturbation) {
  std::mt19937_64 rng(seed);
  const long n = uniform_int(rng, 50, 500);
  const int m = static_cast<int>(uniform_int(rng, 3, 8));

  Eigen::MatrixXd phi(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) phi(i, j) = pdesel::rng::normal(rng);
  }
  std::vector<std::string> names;
  for (int j = 1; j <= m; ++j) names.push_back("c" + std::to_string(j));

  std::vector<int> order(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) order[static_cast<size_t>(j)] = j;
  for (int j = 0; j < m; ++j) {
    std::swap(order[static_cast<size_t>(j)],
              order[static_cast<size_t>(uniform_int(rng, j, m - 1))]);
  }
  const int k = static_cast<int>(uniform_int(rng, 1, m));
  std::vector<int> support(order.begin(), order.begin() + k);
  std::sort(support.begin(), support.end());

  // Keep the intercept well away from zero; the augmentation carries it.
  const double intercept = uniform(rng, 0.5, 2.0) * (pdesel::rng::uniform01(rng) < 0.5 ? -1.0 : 1.0);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, intercept);
  for (int j : support) y += uniform(rng, -2.0, 2.0) * phi.col(j);
  for (Eigen::Index i = 0; i < n; ++i) y(i) += 0.1 * pdesel::rng::normal(rng);

  pdesel::CandidateLibrary lib(std::move(phi), std::move(names), std::move(y));
  const pdesel::ModelFit fit = pdesel::fit_subset(lib, support);
  const pdesel::UncertaintyValue u =
      pdesel::make_uncertainty(static_cast<double>(uniform_int(rng, 1, 5)));
  return pdesel::verify_identity(fit, lib, u, perturbation);
}

int run_verify_equivalence(const RunConfig& cfg) {
  if (cfg.instances < 1) throw UsageError{"--instances must be positive"};
  if (!std::isfinite(cfg.perturb)) throw UsageError{"--perturb must be finite"};

  json reports = json::array();
  long pass_count = 0;
  double max_abs_diff = 0.0;
  for (int i = 0; i < cfg.instances; ++i) {
    const pdesel::EquivalenceReport report =
        equivalence_instance(cfg.seed + static_cast<unsigned long long>(i), cfg.perturb);
    pass_count += report.pass ? 1 : 0;
    max_abs_diff = std::max(max_abs_diff, report.abs_diff);
    reports.push_back(json::parse(pdesel::equivalence_report_json(report)));
  }
  const long fail_count = cfg.instances - pass_count;

  ensure_out_dir(cfg);
  json doc{{"pass_count", pass_count},
           {"fail_count", fail_count},
           {"max_abs_diff", max_abs_diff},
           {"instances", reports}};
  {
    const std::string path = out_path(cfg, "equivalence.json");
    std::ofstream out(path);
    if (!out) {
      throw pdesel::Error(pdesel::ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << doc.dump(2) << "\n";
  }

  if (cfg.json_output) {
    json aggregate{
        {"pass_count", pass_count}, {"fail_count", fail_count}, {"max_abs_diff", max_abs_diff}};
    std::cout << aggregate.dump(2) << "\n";
  } else {
    std::cout << "equivalence battery: " << pass_count << "/" << cfg.instances
              << " passed (max |UBIC - BIC_aug| = " << format_g(max_abs_diff) << ")\n";
  }
  return fail_count == 0 ? 0 : 1;
}

int run_scan_an(const RunConfig& cfg) {
  if (cfg.max_size < 1) throw UsageError{"--max-size must be at least 1"};
  if (cfg.oracle.empty()) throw UsageError{"--oracle must name at least one term"};
  const std::vector<pdesel::AnSetting> settings = parse_schedule(cfg);

  const pdesel::CandidateLibrary lib = obtain_library(cfg);
  const long n = static_cast<long>(lib.n_samples());
  std::vector<double> schedule;
  for (const pdesel::AnSetting& s : settings) schedule.push_back(s.resolve(n));
  std::sort(schedule.begin(), schedule.end());

  std::vector<int> oracle_support;
  for (const std::string& name : cfg.oracle) oracle_support.push_back(lib.column_index(name));
  std::sort(oracle_support.begin(), oracle_support.end());

  const pdesel::SubsetStrategy strategy =
      lib.n_terms() <= 16 ? pdesel::SubsetStrategy::Exhaustive : pdesel::SubsetStrategy::Forward;
  const int max_size = std::min<int>(cfg.max_size, static_cast<int>(lib.n_terms()));
  std::vector<pdesel::ModelFit> fits;
  for (int k = 1; k <= max_size; ++k) {
    try {
      fits.push_back(pdesel::best_subset_of_size(lib, k, strategy));
    } catch (const pdesel::Error&) {
      // Degenerate sizes simply do not contribute candidates to the scan.
    }
  }
  if (fits.empty()) {
    throw pdesel::Error(pdesel::ErrorCode::RankDeficient,
                        "no support size up to " + std::to_string(max_size) + " could be fit");
  }

  const pdesel::AnScanReport report = pdesel::scan_a_n(fits, lib, schedule, oracle_support);

  json rows = json::array();
  for (const pdesel::AnScanRow& row : report.rows) {
    json names = json::array();
    for (int j : row.selected_support) names.push_back(lib.column_names[static_cast<size_t>(j)]);
    rows.push_back({{"a_n", row.a_n},
                    {"selected_support", row.selected_support},
                    {"selected_names", names},
                    {"selected_size", row.selected_size},
                    {"icomp_total", row.icomp_total},
                    {"matches_oracle", row.matches_oracle}});
  }
  json oracle_names = json::array();
  for (int j : report.oracle_support) oracle_names.push_back(lib.column_names[static_cast<size_t>(j)]);
  json doc{{"rows", rows},
           {"oracle_support", report.oracle_support},
           {"oracle_names", oracle_names},
           {"first_matching_a_n",
            report.first_matching_a_n ? json(*report.first_matching_a_n) : json(nullptr)}};

  ensure_out_dir(cfg);
  {
    const std::string path = out_path(cfg, "scan.json");
    std::ofstream out(path);
    if (!out) {
      throw pdesel::Error(pdesel::ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << doc.dump(2) << "\n";
  }

  if (cfg.json_output) {
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  for (const pdesel::AnScanRow& row : report.rows) {
    std::cout << "a_n = " << format_g(row.a_n) << " selects "
              << support_name_set(row.selected_support, lib)
              << (row.matches_oracle ? " (matches oracle)" : "") << "\n";
  }
  if (report.first_matching_a_n) {
    std::cout << "smallest oracle-matching a_n: " << format_g(*report.first_matching_a_n) << "\n";
  } else {
    std::cout << "no scheduled a_n selects the oracle support\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection for sparse PDE discovery: BIC, UBIC, and ICOMP over "
               "best-subset regressions"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (command-line flags win)");
  app.add_option("--seed", cfg.seed, "random seed for every stochastic stage");
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_flag("--json", cfg.json_output, "print the command's result as JSON on stdout");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the Burgers benchmark problem");
  simulate->add_option("--nu", cfg.nu, "viscosity")->capture_default_str();
  simulate->add_option("--x-min", cfg.x_min, "left domain edge")->capture_default_str();
  simulate->add_option("--x-max", cfg.x_max, "right domain edge (periodic wrap)")
      ->capture_default_str();
  simulate->add_option("--nx", cfg.n_x, "spatial grid points")->capture_default_str();
  simulate->add_option("--t-max", cfg.t_max, "final time")->capture_default_str();
  simulate->add_option("--nt", cfg.n_t, "output frames")->capture_default_str();
  simulate->add_option("--initial", cfg.initial, "gaussian_pulse or sine")->capture_default_str();

  auto add_library_options = [&](CLI::App* cmd) {
    cmd->add_option("--field", cfg.field_path, "field CSV to load instead of simulating");
    cmd->add_option("--poly-degree", cfg.poly_degree, "max power of u")->capture_default_str();
    cmd->add_option("--deriv-order", cfg.deriv_order, "max spatial derivative order")
        ->capture_default_str();
    cmd->add_option("--differentiation", cfg.differentiation, "central_fd or spectral")
        ->capture_default_str();
    cmd->add_option("--target-noise", cfg.target_noise,
                    "observation-noise level on u_t, relative to its RMS")
        ->capture_default_str();
    cmd->add_option("--samples", cfg.n_samples, "interior points to sample")
        ->capture_default_str();
    cmd->add_option("--nu", cfg.nu, "viscosity when simulating internally")
        ->capture_default_str();
    cmd->add_option("--initial", cfg.initial, "initial profile when simulating internally")
        ->capture_default_str();
    cmd->add_option("--x-min", cfg.x_min, "left domain edge when simulating internally")
        ->capture_default_str();
    cmd->add_option("--x-max", cfg.x_max, "right domain edge when simulating internally")
        ->capture_default_str();
    cmd->add_option("--nx", cfg.n_x, "spatial grid points when simulating internally")
        ->capture_default_str();
    cmd->add_option("--t-max", cfg.t_max, "final time when simulating internally")
        ->capture_default_str();
    cmd->add_option("--nt", cfg.n_t, "output frames when simulating internally")
        ->capture_default_str();
  };

  CLI::App* build = app.add_subcommand("build-library", "evaluate the candidate-term library");
  add_library_options(build);

  CLI::App* discover =
      app.add_subcommand("discover", "run the full support-size sweep and score every criterion");
  add_library_options(discover);
  discover->add_option("--library", cfg.library_path, "library CSV to load instead of building");
  discover->add_option("--max-size", cfg.max_size, "largest support size")->capture_default_str();
  discover->add_option("--n-boot", cfg.n_boot, "bootstrap replicates per row")
      ->capture_default_str();
  discover->add_option("--an", cfg.a_n_schedule, "ICOMP a_n settings (numbers or log_n)")
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand(
      "verify-equivalence", "check UBIC == BIC of the augmented model on randomized instances");
  verify->add_option("--instances", cfg.instances, "battery size")->capture_default_str();
  verify->add_option("--perturb", cfg.perturb,
                     "perturbation injected into the construction (negative control)")
      ->capture_default_str();

  CLI::App* scan = app.add_subcommand("scan-an", "find the smallest a_n selecting a target support");
  add_library_options(scan);
  scan->add_option("--library", cfg.library_path, "library CSV to load instead of building");
  scan->add_option("--max-size", cfg.max_size, "largest support size")->capture_default_str();
  scan->add_option("--an", cfg.a_n_schedule, "a_n schedule to scan (numbers or log_n)")
      ->capture_default_str();
  scan->add_option("--oracle", cfg.oracle, "term names of the target support")
      ->capture_default_str();

  for (CLI::App* cmd : {simulate, build, discover, verify, scan}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (!config_path.empty()) fold_config_file(load_config_file(config_path), app, cmd, cfg);

    if (cmd == simulate) return run_simulate(cfg);
    if (cmd == build) return run_build_library(cfg);
    if (cmd == discover) return run_discover(cfg);
    if (cmd == verify) return run_verify_equivalence(cfg);
    return run_scan_an(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.message << "\n";
    return 2;
  } catch (const pdesel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
