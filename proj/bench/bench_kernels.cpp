// Serial reference vs OpenMP kernels on the hot paths: stencil application,
// causal marching, dense kernel contraction, and star-kernel assembly.

#include <benchmark/benchmark.h>

#include "nlhyp/green.hpp"
#include "nlhyp/kernels.hpp"
#include "nlhyp/parallel.hpp"
#include "nlhyp/star.hpp"

using namespace nlhyp;

namespace {

GridSpec bench_grid(int n = 1) { return GridSpec(-4.0, 4.0, 10.0, 0.0625, n, -2.25, 2.25); }

struct Fixture {
    GridSpec g = bench_grid();
    HyperbolicOperator op = HyperbolicOperator::wave(g, PotentialSpec::gaussian(1.0, 0.0, 0.0, 1.0));
    KernelOperator w = make_bump_kernel(
        g, BumpKernelParams{NodeBox{(g.tau_minus_index() + g.tau_plus_index()) / 2 - 4,
                                    (g.tau_minus_index() + g.tau_plus_index()) / 2 + 4,
                                    g.nx / 2 - 20, g.nx / 2 + 20},
                            3, 1, true, 1.0});
    Field f = make_bump_field(g, NodeBox{g.nt / 2 - 10, g.nt / 2 + 10, g.nx / 2 - 16,
                                         g.nx / 2 + 16},
                              2);
};

Fixture& fixture() {
    static Fixture fx;
    return fx;
}

void run_mode(benchmark::State& state, bool parallel, int which) {
    Fixture& fx = fixture();
    bool was = parallel_enabled();
    set_parallel(parallel);
    for (auto _ : state) {
        switch (which) {
            case 0:
                benchmark::DoNotOptimize(fx.op.apply(fx.f));
                break;
            case 1:
                benchmark::DoNotOptimize(fx.op.stencil().retarded(fx.f));
                break;
            case 2:
                benchmark::DoNotOptimize(fx.w.apply(fx.f));
                break;
        }
    }
    set_parallel(was);
}

void bench_stencil_serial(benchmark::State& s) { run_mode(s, false, 0); }
void bench_stencil_parallel(benchmark::State& s) { run_mode(s, true, 0); }
void bench_march_serial(benchmark::State& s) { run_mode(s, false, 1); }
void bench_march_parallel(benchmark::State& s) { run_mode(s, true, 1); }
void bench_kernel_serial(benchmark::State& s) { run_mode(s, false, 2); }
void bench_kernel_parallel(benchmark::State& s) { run_mode(s, true, 2); }

void bench_star_assembly(benchmark::State& state) {
    bool was = parallel_enabled();
    set_parallel(state.range(0) != 0);
    GridSpec g(-4.0, 4.0, 10.0, 0.125, 1, -2.25, 2.25);
    StarProductSpec spec;
    spec.theta0 = 0.5;
    spec.symbol.sigma = 0.35;
    NodeBox box{g.t_index(0.0) - 3, g.t_index(0.0) + 3, g.nx / 2 - 3, g.nx / 2 + 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_moyal_eps(g, spec, 0.2, box));
    }
    set_parallel(was);
}

} // namespace

BENCHMARK(bench_stencil_serial);
BENCHMARK(bench_stencil_parallel);
BENCHMARK(bench_march_serial);
BENCHMARK(bench_march_parallel);
BENCHMARK(bench_kernel_serial);
BENCHMARK(bench_kernel_parallel);
BENCHMARK(bench_star_assembly)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
