#include "wopsip/analysis.hpp"
#include "wopsip/assembly.hpp"
#include "wopsip/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace wopsip;

double source(const Vec& x) { return std::sin(3.0 * x(0)) + x(1); }

void BM_BuildMesh(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate_square(n, n));
    state.SetItemsProcessed(state.iterations() * 2 * n * n);
}
BENCHMARK(BM_BuildMesh)->Arg(32)->Arg(64)->Arg(128);

void BM_AssembleWopsip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = generate_square(n, n);
    const DofMap dofs(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_wopsip(mesh, dofs));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(mesh.num_cells()));
}
BENCHMARK(BM_AssembleWopsip)->Arg(32)->Arg(64)->Arg(128);

void BM_AssembleSip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = generate_square(n, n);
    const DofMap dofs(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_sip_rsip(mesh, dofs, {Scheme::Sip, 1.0, 10.0}));
}
BENCHMARK(BM_AssembleSip)->Arg(32)->Arg(64);

void BM_AssembleLoad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = generate_square(n, n);
    const DofMap dofs(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_load(mesh, dofs, source));
}
BENCHMARK(BM_AssembleLoad)->Arg(32)->Arg(64);

void BM_SolveDirect(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SparseSystem sys = assemble_system(generate_square(n, n), {}, source);
    for (auto _ : state) benchmark::DoNotOptimize(solve_spd(sys, {SolveMethod::DirectCholesky}));
    state.counters["dofs"] = static_cast<double>(sys.rhs.size());
}
BENCHMARK(BM_SolveDirect)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolvePcg(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SparseSystem sys = assemble_system(generate_square(n, n), {}, source);
    for (auto _ : state) benchmark::DoNotOptimize(solve_spd(sys, {SolveMethod::PcgJacobi}));
}
BENCHMARK(BM_SolvePcg)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Kuhn3d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = generate_cube(n, n, n);
    for (auto _ : state) {
        const SparseSystem sys = assemble_system(mesh, {}, source);
        benchmark::DoNotOptimize(solve_spd(sys));
    }
}
BENCHMARK(BM_Kuhn3d)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnergyError(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = generate_square(n, n);
    const ExactSolution exact = exact_solution("sinsin", 2);
    const FeField field = cr_interpolate(mesh, exact.u);
    for (auto _ : state) benchmark::DoNotOptimize(energy_error(mesh, field, exact, mesh.h()));
}
BENCHMARK(BM_EnergyError)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
