#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "qaept/banded.hpp"
#include "qaept/invariants.hpp"
#include "qaept/propagator.hpp"
#include "qaept/quantum.hpp"

using namespace qaept;

namespace {

WaveFunction ground_state(const Grid& grid, PhysicalConstants pc) {
  WaveFunction psi(grid, 0.0, pc);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    psi[i] = std::exp(-0.5 * x * x);
  }
  psi.normalize();
  return psi;
}

void BM_CrankNicolsonStep(benchmark::State& state) {
  const Grid grid(-12.0, 12.0, static_cast<int>(state.range(0)));
  const PhysicalConstants pc;
  const auto sys = LsodeSystem::caldirola_kanai(0.4, 1.0);
  auto psi = ground_state(grid, pc);
  double t = 0.0;
  for (auto _ : state) {
    psi = crank_nicolson_step(psi, sys, pc, t, 1e-3);
    t += 1e-3;
  }
  state.SetItemsProcessed(state.iterations() * grid.n());
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(256)->Arg(512)->Arg(1024);

void BM_BandedSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::complex<double>> rhs(n, {1.0, 0.5});
  for (auto _ : state) {
    BandedLU lu(n, 2, 2);
    for (int i = 0; i < n; ++i) {
      lu.at(i, 0) = {4.0, 1.0};
      if (i >= 1) lu.at(i, -1) = {1.0, 0.2};
      if (i >= 2) lu.at(i, -2) = {-0.1, 0.0};
      if (i + 1 < n) lu.at(i, 1) = {1.0, 0.2};
      if (i + 2 < n) lu.at(i, 2) = {-0.1, 0.0};
    }
    lu.factor();
    auto b = rhs;
    lu.solve(b);
    benchmark::DoNotOptimize(b.data());
  }
}
BENCHMARK(BM_BandedSolve)->Arg(512)->Arg(2048);

void BM_IntegrateClassical(benchmark::State& state) {
  const auto sys = LsodeSystem::caldirola_kanai(0.4, 1.0);
  std::vector<double> t_grid(101);
  for (int i = 0; i <= 100; ++i) t_grid[i] = 0.1 * i;
  for (auto _ : state) {
    auto basis = integrate_classical(sys, t_grid);
    benchmark::DoNotOptimize(basis.u1(5.0));
  }
}
BENCHMARK(BM_IntegrateClassical);

void BM_DmEigenstate(benchmark::State& state) {
  const Grid grid(-12.0, 12.0, 512);
  const PhysicalConstants pc;
  const auto basis = closed_form_ck(0.4, 1.0);
  for (auto _ : state) {
    auto psi = dm_eigenstate(basis, 1.0, 0.4, 2, 1.0, grid, pc);
    benchmark::DoNotOptimize(psi[256]);
  }
}
BENCHMARK(BM_DmEigenstate);

void BM_QaeptApply(benchmark::State& state) {
  const Grid grid(-12.0, 12.0, static_cast<int>(state.range(0)));
  const PhysicalConstants pc;
  const auto basis = closed_form_ck(0.4, 1.0);
  const auto map = AeptMap::to_harmonic(basis, 1.0, 0.4);
  auto psi = ground_state(grid, pc);
  psi.set_t(1.0);
  for (auto _ : state) {
    auto phi = qaept_apply(psi, map);
    benchmark::DoNotOptimize(phi[0]);
  }
  state.SetItemsProcessed(state.iterations() * grid.n());
}
BENCHMARK(BM_QaeptApply)->Arg(256)->Arg(512);

void BM_InvariantEigensolve(benchmark::State& state) {
  const Grid grid(-12.0, 12.0, static_cast<int>(state.range(0)));
  const PhysicalConstants pc;
  const auto basis = closed_form_ck(0.4, 1.0);
  const auto spec = InvariantSpec::dodonov_manko(0.4, 1.0);
  for (auto _ : state) {
    auto I = build_invariant(spec, basis, grid, pc, 1.0);
    auto evals = lowest_eigenvalues(I, 5);
    benchmark::DoNotOptimize(evals.data());
  }
}
BENCHMARK(BM_InvariantEigensolve)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
