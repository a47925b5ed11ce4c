#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rkctl/dgsem.hpp"
#include "rkctl/exner.hpp"
#include "rkctl/integrator.hpp"
#include "rkctl/spectra.hpp"
#include "rkctl/tableau.hpp"

using namespace rkctl;

namespace {

dgsem::Advection2D advection(int elements, double alpha) {
  return {dgsem::Mesh2D::warped(elements, 3, dgsem::WarpParameters{}), {1.0, 1.0}, alpha};
}

std::vector<double> smooth_state(const dgsem::Mesh2D& mesh) {
  std::vector<double> u(mesh.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.1 * std::sin(mesh.x[i]) * std::cos(mesh.y[i]);
  return u;
}

void BM_AdvectionRhs(benchmark::State& state) {
  const auto op = advection(static_cast<int>(state.range(0)), static_cast<double>(state.range(1)) / 2.0);
  const auto u = smooth_state(op.mesh());
  std::vector<double> du(u.size());
  for (auto _ : state) {
    op.rhs(u, du);
    benchmark::DoNotOptimize(du.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_AdvectionRhs)->Args({8, 0})->Args({8, 1})->Args({16, 0})->Args({16, 1});

void BM_RkStep(benchmark::State& state) {
  const auto op = advection(8, 0.0);
  const auto u = smooth_state(op.mesh());
  const RhsFunction f = [&](double, std::span<const double> y, std::span<double> dy) { op.rhs(y, dy); };
  const auto tab = builtin(state.range(0) == 0 ? "BS3_3F" : "SSP3_4");
  for (auto _ : state) benchmark::DoNotOptimize(rk_step(tab, f, 0.0, u, 1e-3));
}
BENCHMARK(BM_RkStep)->Arg(0)->Arg(1);

void BM_Eigenvalues(benchmark::State& state) {
  const dgsem::Advection1D op(dgsem::Mesh1D(static_cast<int>(state.range(0)), 3, 0.0, 1.0), 1.0, 0.5);
  const spectra::LinearOperator lin = [&](std::span<const double> u, std::span<double> du) { op.rhs(u, du); };
  const auto m = spectra::assemble_operator(lin, op.size());
  for (auto _ : state) benchmark::DoNotOptimize(spectra::eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CharacteristicRoots(benchmark::State& state) {
  const exner::SweExnerParams p;
  exner::SweExnerState s{10.0, 10.0, 3.0, 0.0};
  for (auto _ : state) {
    s.hv1 += 1e-9;
    benchmark::DoNotOptimize(exner::characteristic_roots(s, p));
  }
}
BENCHMARK(BM_CharacteristicRoots);

}  // namespace

BENCHMARK_MAIN();
