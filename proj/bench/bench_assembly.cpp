// Serial reference path versus OpenMP kernels for one time level.
#include "plg/characteristics.hpp"
#include "plg/manufactured.hpp"
#include "plg/scheme.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace plg;

namespace {

struct Fixture {
    explicit Fixture(int n)
        : mesh(n, Diagonal::right), quad(quad_rule(5)), exact(0.1, 0.1), dofs(mesh)
    {
        params.dt = 0.5 / n;
        data = {[this](Vec2 x, double t) { return exact.velocity(x, t); },
                [this](Vec2 x, double t) { return exact.forcing_f(x, t); },
                [this](Vec2 x, double t) { return exact.forcing_F(x, t); }};
        prev = zero_state(mesh);
        prev.u = interpolate([this](Vec2 x, double t) { return exact.velocity(x, t); }, mesh, 0.0);
        prev.C = interpolate([this](Vec2 x, double t) { return exact.tensor(x, t); }, mesh, 0.0);
        table = build_upwind_table(mesh, quad, data.w, params.dt, params.dt);
    }

    Mesh mesh;
    QuadratureRule quad;
    ManufacturedSolution exact;
    DofMap dofs;
    Params params;
    ProblemData data;
    State prev;
    UpwindTable table;
};

void assemble(benchmark::State& state, Execution mode)
{
    const Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto sys = assemble_step_system(f.mesh, f.quad, f.dofs, f.params, f.prev, f.table, f.params.dt, f.data,
                                        AssemblyOptions{mode, {}});
        benchmark::DoNotOptimize(sys.rhs.data());
    }
    state.counters["threads"] = mode == Execution::serial ? 1 : omp_get_max_threads();
}

void upwind(benchmark::State& state, bool parallel)
{
    const Fixture f(static_cast<int>(state.range(0)));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(parallel ? saved : 1);
    for (auto _ : state) {
        auto t = build_upwind_table(f.mesh, f.quad, f.data.w, f.params.dt, f.params.dt);
        benchmark::DoNotOptimize(t.foot.data());
    }
    omp_set_num_threads(saved);
}

void solve(benchmark::State& state)
{
    const Fixture f(static_cast<int>(state.range(0)));
    const auto sys = assemble_step_system(f.mesh, f.quad, f.dofs, f.params, f.prev, f.table, f.params.dt, f.data);
    SparseDirectSolver solver;
    for (auto _ : state) {
        auto x = solver.solve(sys.matrix, sys.rhs);
        benchmark::DoNotOptimize(x.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(assemble, serial, Execution::serial)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assemble, parallel, Execution::parallel)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(upwind, serial, false)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(upwind, parallel, true)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
