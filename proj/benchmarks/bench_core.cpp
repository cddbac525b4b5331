#include <benchmark/benchmark.h>

#include "bvc/densities.hpp"
#include "bvc/marginal_complex.hpp"
#include "bvc/philox.hpp"
#include "bvc/polytopes.hpp"
#include "bvc/rational.hpp"
#include "bvc/reconstruct.hpp"
#include "bvc/sim.hpp"

#include <cstdint>

namespace {

using bvc::Rational;

Rational q(long num, long den) { return Rational(bvc::BigInt(num), bvc::BigInt(den)); }

bvc::MarginalComplex triple_complex(const bvc::CovarianceTriple& s) {
  bvc::MarginalComplex c;
  c.variables = {{"A", {1, -1}}, {"B", {1, -1}}, {"C", {1, -1}}};
  const auto add = [&c](const char* v1, const char* v2, const Rational& sigma) {
    const auto d = bvc::density_from_covariance(sigma);
    bvc::MarginalConstraint mc;
    mc.over = {v1, v2};
    mc.table[{1, 1}] = d.pp;
    mc.table[{1, -1}] = d.pm;
    mc.table[{-1, 1}] = d.mp;
    mc.table[{-1, -1}] = d.mm;
    c.constraints.push_back(mc);
  };
  add("A", "B", s.ab);
  add("A", "C", s.ac);
  add("B", "C", s.bc);
  return c;
}

void BM_TetrahedronCheck(benchmark::State& state) {
  const bvc::CovarianceTriple s{q(1, 2), q(1, 2), q(-1, 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::tetrahedron_check(s));
  }
}
BENCHMARK(BM_TetrahedronCheck);

void BM_BellSixCheck(benchmark::State& state) {
  const bvc::CovarianceTriple s{q(1, 2), q(1, 2), q(-1, 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::bell_six_check(s));
  }
}
BENCHMARK(BM_BellSixCheck);

void BM_ChshCheck(benchmark::State& state) {
  const bvc::CovarianceQuad s{q(707107, 1000000), q(707107, 1000000),
                              q(707107, 1000000), q(-707107, 1000000)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::chsh_check(s));
  }
}
BENCHMARK(BM_ChshCheck);

void BM_SolveTripleFeasible(benchmark::State& state) {
  const auto complex = triple_complex({q(1, 4), q(-1, 4), q(1, 8)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::solve_complex(complex));
  }
}
BENCHMARK(BM_SolveTripleFeasible);

void BM_SolveTripleInfeasible(benchmark::State& state) {
  const auto complex = triple_complex({q(1, 2), q(1, 2), q(-1, 2)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::solve_complex(complex));
  }
}
BENCHMARK(BM_SolveTripleInfeasible);

void BM_ChshReconstructFeasible(benchmark::State& state) {
  const bvc::CovarianceQuad s{q(1, 2), q(1, 2), q(1, 2), q(-1, 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::chsh_reconstruct(s));
  }
}
BENCHMARK(BM_ChshReconstructFeasible);

void BM_ChshReconstructInfeasible(benchmark::State& state) {
  const bvc::CovarianceQuad s{Rational(1), Rational(1), Rational(1),
                              Rational(-1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::chsh_reconstruct(s));
  }
}
BENCHMARK(BM_ChshReconstructInfeasible);

void BM_ReconstructJoint(benchmark::State& state) {
  const bvc::CovarianceTriple s{q(1, 2), q(1, 2), q(1, 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::reconstruct_joint(s, Rational(0)));
  }
}
BENCHMARK(BM_ReconstructJoint);

void BM_RoundToDenominator(benchmark::State& state) {
  const double pi = 3.14159265358979323846;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::round_to_denominator(pi, 10'000));
  }
}
BENCHMARK(BM_RoundToDenominator);

void BM_PhiloxBlock(benchmark::State& state) {
  const bvc::CounterRng rng(1);
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.draw(0, index++));
  }
}
BENCHMARK(BM_PhiloxBlock);

void BM_RunFiniteSource(benchmark::State& state) {
  bvc::FiniteSourceModel m;
  m.lambda_weights = {q(5, 12), q(1, 12), q(1, 4), q(1, 4)};
  m.responses_station1 = {
      {"a", {1, 1, -1, -1}}, {"b", {1, -1, 1, -1}}, {"c", {-1, 1, 1, -1}}};
  m.responses_station2 = m.responses_station1;
  bvc::ExperimentPlan plan;
  plan.settings = {{"a", {}}, {"b", {}}, {"c", {}}};
  plan.categories = {{"a", "b"}, {"a", "c"}, {"b", "c"}};
  plan.trials_per_category = static_cast<std::uint64_t>(state.range(0));
  plan.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::run_experiment(m, plan));
  }
  state.SetItemsProcessed(state.iterations() * 3 * state.range(0));
}
BENCHMARK(BM_RunFiniteSource)->Arg(10'000)->Arg(100'000);

void BM_RunTimeSlot(benchmark::State& state) {
  bvc::TimeSlotModel m;
  m.category_densities = {
      bvc::make_pair_density(q(3, 8), q(1, 8), q(1, 8), q(3, 8)),
      bvc::make_pair_density(q(3, 8), q(1, 8), q(1, 8), q(3, 8)),
      bvc::make_pair_density(q(1, 8), q(3, 8), q(3, 8), q(1, 8))};
  bvc::ExperimentPlan plan;
  plan.settings = {{"a", {}}, {"b", {}}, {"c", {}}};
  plan.categories = {{"a", "b"}, {"a", "c"}, {"b", "c"}};
  plan.trials_per_category = static_cast<std::uint64_t>(state.range(0));
  plan.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvc::run_experiment(m, plan));
  }
  state.SetItemsProcessed(state.iterations() * 3 * state.range(0));
}
BENCHMARK(BM_RunTimeSlot)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
