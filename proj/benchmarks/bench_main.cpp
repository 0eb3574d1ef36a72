// Microbenchmarks for the hot paths: subset fitting, per-size search,
// complexity evaluation, simulation, library assembly, and the bootstrap
// quantifier. Fixtures are built once outside the timed loops.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pdesel/candidate_library.hpp"
#include "pdesel/criteria.hpp"
#include "pdesel/field.hpp"
#include "pdesel/library_builder.hpp"
#include "pdesel/regression.hpp"
#include "pdesel/rng.hpp"
#include "pdesel/uncertainty.hpp"

namespace {

pdesel::CandidateLibrary random_library(long n, int m, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd phi(n, m);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) phi(i, j) = pdesel::rng::normal(gen);
  Eigen::VectorXd y = 2.0 * phi.col(0) - phi.col(1);
  if (m > 2) y += 0.5 * phi.col(2);
  for (long i = 0; i < n; ++i) y(i) += 0.3 + 0.1 * pdesel::rng::normal(gen);
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) names.push_back("c" + std::to_string(j + 1));
  return pdesel::CandidateLibrary(std::move(phi), std::move(names), std::move(y));
}

const pdesel::CandidateLibrary& desk_library() {
  static const pdesel::CandidateLibrary lib = [] {
    const pdesel::FieldData field = pdesel::simulate_burgers(
        0.1, pdesel::BurgersDomain{}, pdesel::InitialCondition::GaussianPulse, 0);
    return pdesel::build_library(field, pdesel::LibrarySpec{}, 10000, 0);
  }();
  return lib;
}

void BM_FitSubset(benchmark::State& state) {
  const pdesel::CandidateLibrary lib = random_library(state.range(0), 16, 7);
  const std::vector<int> support{2, 5, 9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdesel::fit_subset(lib, support));
  }
}
BENCHMARK(BM_FitSubset)->Arg(1000)->Arg(10000);

void BM_BestSubsets(benchmark::State& state) {
  const pdesel::CandidateLibrary& lib = desk_library();
  const int max_size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pdesel::best_subsets(lib, max_size, pdesel::SubsetStrategy::Exhaustive));
  }
}
BENCHMARK(BM_BestSubsets)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Complexity(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 gen(11);
  Eigen::MatrixXd raw(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) raw(i, j) = pdesel::rng::normal(gen);
  const Eigen::MatrixXd spd =
      raw * raw.transpose() + 0.1 * static_cast<double>(dim) * Eigen::MatrixXd::Identity(dim, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdesel::max_info_complexity(spd));
  }
}
BENCHMARK(BM_Complexity)->Arg(4)->Arg(9)->Arg(17);

void BM_SimulateBurgers(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdesel::simulate_burgers(
        0.1, pdesel::BurgersDomain{}, pdesel::InitialCondition::GaussianPulse, 0));
  }
}
BENCHMARK(BM_SimulateBurgers)->Unit(benchmark::kMillisecond);

void BM_BuildLibrary(benchmark::State& state) {
  const pdesel::FieldData field = pdesel::simulate_burgers(
      0.1, pdesel::BurgersDomain{}, pdesel::InitialCondition::GaussianPulse, 0);
  const long samples = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdesel::build_library(field, pdesel::LibrarySpec{}, samples, 0));
  }
}
BENCHMARK(BM_BuildLibrary)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_QuantifyBootstrap(benchmark::State& state) {
  const pdesel::CandidateLibrary lib = random_library(2000, 8, 3);
  const pdesel::ModelFit fit = pdesel::fit_subset(lib, {0, 1, 2});
  const int n_boot = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdesel::quantify_default(fit, lib, n_boot, 0));
  }
}
BENCHMARK(BM_QuantifyBootstrap)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
