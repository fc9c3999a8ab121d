#include <benchmark/benchmark.h>

#include "cavifem/driver.hpp"

namespace {

using namespace cavifem;

void BM_AssembleStiffness(benchmark::State& state) {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  const Mesh mesh = build_rect_mesh(spec.domain(), 48, 32);
  const DofMap dofmap = build_dofmap(mesh, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_stiffness(coeffs, mesh, dofmap));
  }
  state.SetLabel("ndofs=" + std::to_string(dofmap.n_dofs));
}
BENCHMARK(BM_AssembleStiffness)->Arg(1)->Arg(2);

void BM_FixedPointSolve(benchmark::State& state) {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  const Mesh mesh = build_rect_mesh(spec.domain(), 24, 16);
  const DofMap dofmap = build_dofmap(mesh, static_cast<int>(state.range(0)));
  SolverConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_point_solve(coeffs, config, mesh, dofmap));
  }
  state.SetLabel("ndofs=" + std::to_string(dofmap.n_dofs));
}
BENCHMARK(BM_FixedPointSolve)->Arg(1)->Arg(2);

void BM_Refine(benchmark::State& state) {
  const ProblemSpec spec;
  const Mesh mesh = build_rect_mesh(spec.domain(), 24, 16);
  MarkSet marks;
  for (int k = 0; k < mesh.num_triangles(); k += 2) marks.marked.insert(k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(refine(mesh, marks));
  }
}
BENCHMARK(BM_Refine);

void BM_EstimateNitsche(benchmark::State& state) {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  const Mesh mesh = build_rect_mesh(spec.domain(), 24, 16);
  const DofMap dofmap = build_dofmap(mesh, 1);
  SolverConfig config;
  const SolveResult result = fixed_point_solve(coeffs, config, mesh, dofmap);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_nitsche(coeffs, config, mesh, dofmap, result.pressure));
  }
}
BENCHMARK(BM_EstimateNitsche);

}  // namespace

BENCHMARK_MAIN();
