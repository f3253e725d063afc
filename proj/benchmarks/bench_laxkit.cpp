#include <benchmark/benchmark.h>

#include "laxkit/discrete.hpp"
#include "laxkit/fields.hpp"
#include "laxkit/rmatrix.hpp"

using namespace laxkit;

static void BM_CybeResidual(benchmark::State& state) {
    SpectralOperator r = trig_An_r(int(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cybe_residual(r, cplx(0.7, 0.1), cplx(0.2, -0.3)));
}
BENCHMARK(BM_CybeResidual)->Arg(1)->Arg(2);

static void BM_DstTransfer(benchmark::State& state) {
    using namespace laxkit::discrete;
    const int n = int(state.range(0));
    Model m{Kind::Dst, n};
    SplitMix64 rng(1);
    PhasePoint pt = random_point(m, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(transfer(m, pt, std::min(3, n)));
}
BENCHMARK(BM_DstTransfer)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_SklyaninResidual(benchmark::State& state) {
    using namespace laxkit::discrete;
    Model m{Kind::Dst, int(state.range(0))};
    SplitMix64 rng(2);
    PhasePoint pt = random_point(m, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(sklyanin_residual(m, pt, cplx(1.3), cplx(0.4)));
}
BENCHMARK(BM_SklyaninResidual)->Arg(4)->Arg(16);

static void BM_TodaLeapfrog(benchmark::State& state) {
    using namespace laxkit::discrete;
    Model m{Kind::TodaQuadratic, 8};
    SplitMix64 rng(3);
    PhasePoint p0 = random_point(m, rng, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(m, 2, p0, 1e-3, 1000, Scheme::Leapfrog, 2));
}
BENCHMARK(BM_TodaLeapfrog);

static void BM_NlsSplitStep(benchmark::State& state) {
    using namespace laxkit::fields;
    const int mpts = int(state.range(0));
    ModelParams params;
    SplitMix64 rng(4);
    FieldState s = random_state(FieldKind::Nls, mpts, 10.0, 6, 0.4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve(FieldKind::Nls, s, params, 1e-3, 100,
                                        FieldScheme::SplitStep));
}
BENCHMARK(BM_NlsSplitStep)->Arg(256)->Arg(512);

static void BM_MonodromyNumeric(benchmark::State& state) {
    using namespace laxkit::fields;
    const int mpts = int(state.range(0));
    ModelParams params;
    SplitMix64 rng(5);
    FieldState s = random_state(FieldKind::SineGordon, mpts, 10.0, 5, 0.3, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(monodromy_numeric(FieldKind::SineGordon, s, params,
                                                   cplx(0.4, 0.1)));
}
BENCHMARK(BM_MonodromyNumeric)->Arg(256)->Arg(512);

static void BM_ContinuumZeroCurvature(benchmark::State& state) {
    using namespace laxkit::fields;
    ModelParams params;
    SplitMix64 rng(6);
    FieldState s = random_state(FieldKind::AtftA2, int(state.range(0)), 10.0, 5, 0.3, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(zero_curvature_residual(FieldKind::AtftA2,
                                                         Variant::Hamiltonian, s, params,
                                                         cplx(0.5, 0.2)));
}
BENCHMARK(BM_ContinuumZeroCurvature)->Arg(256);

BENCHMARK_MAIN();
