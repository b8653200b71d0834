#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "helegraph/dtn.hpp"
#include "helegraph/elliptic.hpp"
#include "helegraph/whitney.hpp"

using namespace helegraph;

namespace {
const double P = 2.0 * M_PI;

GraphInterface cosine(int n, double amp) {
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = 1.0 + amp * std::cos(j * P / n);
    return make_interface(s, P, 2.0);
}
} // namespace

static void BM_SolveBulkFourier(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GraphInterface f = cosine(n, 0.0);
    TransformedProblem p = flatten(f, Phase::plus, SpdMatrix2::identity(), n);
    for (int i = 0; i < n; ++i) p.dirichlet_bottom[i] = 1.0;
    for (auto _ : state) {
        BulkSolution u = solve_bulk(p);
        benchmark::DoNotOptimize(u.values.data());
    }
    state.SetComplexityN(n * (n - 1));
}
BENCHMARK(BM_SolveBulkFourier)->Arg(64)->Arg(128)->Arg(256)->Complexity();

static void BM_SolveBulkDirect(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GraphInterface f = cosine(n, 0.1);
    TransformedProblem p = flatten(f, Phase::plus, SpdMatrix2::identity(), n);
    for (int i = 0; i < n; ++i) p.dirichlet_bottom[i] = 1.0;
    for (auto _ : state) {
        BulkSolution u = solve_bulk(p);
        benchmark::DoNotOptimize(u.values.data());
    }
    state.SetComplexityN(n * (n - 1));
}
BENCHMARK(BM_SolveBulkDirect)->Arg(64)->Arg(128)->Arg(256)->Complexity();

static void BM_VelocityDifferenceLaw(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GraphInterface f = cosine(n, 0.1);
    const BoundaryLaw law = BoundaryLaw::difference();
    DtnOptions opt;
    opt.ny = n;
    for (auto _ : state) {
        VelocityField v = velocity(f, law, opt);
        benchmark::DoNotOptimize(v.values.data());
    }
}
BENCHMARK(BM_VelocityDifferenceLaw)->Arg(64)->Arg(128);

static void BM_MuskatRhs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GraphInterface f = cosine(n, 0.1);
    for (auto _ : state) {
        auto rhs = muskat_rhs(f);
        benchmark::DoNotOptimize(rhs.data());
    }
}
BENCHMARK(BM_MuskatRhs)->Arg(128)->Arg(512);

static void BM_SeminormPairSweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GraphInterface f = cosine(n, 0.1);
    for (auto _ : state) {
        auto rep = seminorm(f, SeminormKind::lipschitz);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_SeminormPairSweep)->Arg(256)->Arg(1024);

static void BM_WhitneyExtend1(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const WhitneyDecomposition w = WhitneyDecomposition::build(m, 1);
    GridSamples g([](const VecN& x) { return std::exp(-x[0] * x[0]); }, m, 1);
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-4;
        benchmark::DoNotOptimize(extend1(g, w, {0.3 + std::fmod(x, 0.1), 0.0}));
    }
}
BENCHMARK(BM_WhitneyExtend1)->Arg(3)->Arg(6);

BENCHMARK_MAIN();
