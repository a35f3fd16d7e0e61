#include <benchmark/benchmark.h>

#include "deform/pipelines.hpp"

namespace {

using namespace deform;

SparseMatrix dense_test_matrix(int n)
{
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.set(i, j, Rational((i * 7 + j * 3) % 11 - 5, (i + j) % 4 + 1));
    return m;
}

void bm_bareiss_rank(benchmark::State& state)
{
    SparseMatrix m = dense_test_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(bm_bareiss_rank)->Arg(16)->Arg(32)->Arg(64);

void bm_kernel_basis(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    SparseMatrix m = dense_test_matrix(n);
    // force a nontrivial kernel
    for (int j = 0; j < n; ++j)
        m.set(n - 1, j, m.at(0, j));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_basis(m));
}
BENCHMARK(bm_kernel_basis)->Arg(16)->Arg(32);

void bm_cech_cohomology(benchmark::State& state)
{
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) {
        CechCohomology h = cech_cohomology(make_line_bundle(d, make_p1_cover(6)));
        benchmark::DoNotOptimize(h.h0);
    }
}
BENCHMARK(bm_cech_cohomology)->Arg(-3)->Arg(3);

void bm_pair_eu(benchmark::State& state)
{
    CoherentSystem sys;
    sys.e = make_line_bundle(1, make_p1_cover(4));
    sys.u = {GlobalSection{{lp_monomial(0)}, {lp_monomial(-1)}}};
    for (auto _ : state) {
        PairEUReport r = pair_EU_report(sys, 4);
        benchmark::DoNotOptimize(r.tangent);
    }
}
BENCHMARK(bm_pair_eu);

} // namespace

BENCHMARK_MAIN();
