#include <benchmark/benchmark.h>

#include "lgcrit/catalog.hpp"
#include "lgcrit/emap.hpp"
#include "lgcrit/monodromy.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"

using namespace lgcrit;

namespace {

ModelSpec desk(int i) {
    switch (i) {
    case 0: return Bundle{1, {1}};
    case 1: return Bundle{3, {1, 2}};
    case 2: return BlowupProduct{4, 2};
    default: return BlowupBundle{5, 0};
    }
}

void BM_SolveAll(benchmark::State& state) {
    auto family = lg_family(desk(int(state.range(0))));
    SolveOptions opts;
    opts.threads = int(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(solve_all(family, family.default_t(), opts));
    state.SetLabel(to_string(family.spec));
}
BENCHMARK(BM_SolveAll)->ArgsProduct({{0, 1, 2, 3}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_NewtonRefine(benchmark::State& state) {
    auto family = lg_family(desk(int(state.range(0))));
    double t = family.default_t();
    auto system = critical_system(family, t);
    auto seeds = asymptotic_seeds(family.spec, t);
    NewtonWorkspace ws;
    for (auto _ : state)
        for (const auto& s : seeds.seeds) benchmark::DoNotOptimize(newton_refine(system, s.point(), {}, &ws));
    state.SetItemsProcessed(state.iterations() * std::int64_t(seeds.seeds.size()));
    state.SetLabel(to_string(family.spec));
}
BENCHMARK(BM_NewtonRefine)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_Cohomology(benchmark::State& state) {
    auto model = make_model(desk(int(state.range(0))));
    TDivisor d = TDivisor::zero(model.ray_count());
    for (int F = 0; F < model.ray_count(); ++F) d.coeffs[F] = (F % 3) - 1;
    for (auto _ : state) benchmark::DoNotOptimize(line_bundle_cohomology(model, d));
    state.SetLabel(to_string(desk(int(state.range(0)))));
}
BENCHMARK(BM_Cohomology)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_StrongExceptionality(benchmark::State& state) {
    auto spec = desk(int(state.range(0)));
    auto model = make_model(spec);
    auto classes = reference_collection(spec).classes();
    for (auto _ : state) benchmark::DoNotOptimize(is_strongly_exceptional(model, classes));
    state.SetLabel(to_string(spec));
}
BENCHMARK(BM_StrongExceptionality)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_GeneratorTracking(benchmark::State& state) {
    auto family = lg_family(desk(int(state.range(0))));
    MonodromyEngine engine(family, family.default_t());
    auto loop = generator_loop(family, family.default_t(), 0);
    for (auto _ : state) benchmark::DoNotOptimize(engine.track(loop));
    state.SetLabel(to_string(family.spec));
}
BENCHMARK(BM_GeneratorTracking)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Frobenius(benchmark::State& state) {
    auto model = make_model(desk(int(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(frobenius_image(model, 12));
}
BENCHMARK(BM_Frobenius)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
