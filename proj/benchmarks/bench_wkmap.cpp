#include "wkmap/correspondences.hpp"
#include "wkmap/hierarchy.hpp"
#include "wkmap/hodge.hpp"
#include "wkmap/loopeq.hpp"

#include <benchmark/benchmark.h>

using namespace wkm;

static void BM_FreeEnergyWK(benchmark::State& st) {
    int g = static_cast<int>(st.range(0));
    for (auto _ : st) {
        CorrelatorTable table;  // cold cache each time
        benchmark::DoNotOptimize(free_energy_wk(g, 6, table));
    }
}
BENCHMARK(BM_FreeEnergyWK)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_GroupAction(benchmark::State& st) {
    int order = static_cast<int>(st.range(0));
    Tuple t = tuple_symbols("t", order);
    Series1 phi = special_element(order + 2);
    for (auto _ : st) benchmark::DoNotOptimize(act(t, phi, order));
}
BENCHMARK(BM_GroupAction)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_SolveLoop(benchmark::State& st) {
    int g = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_loop(g));
}
BENCHMARK(BM_SolveLoop)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_FPTransform(benchmark::State& st) {
    int degree = static_cast<int>(st.range(0));
    HodgeParams s = symbolic_sigma(2);
    for (auto _ : st) benchmark::DoNotOptimize(fp_transform(degree, 2, s, 3));
}
BENCHMARK(BM_FPTransform)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_HodgeWK(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(verify_hodge_wk(4, 2, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_HodgeWK)->Arg(3)->Arg(5)->Unit(benchmark::kSecond)->Iterations(1);

static void BM_QuasiMiuraFlow(benchmark::State& st) {
    int g = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(flow(quasi_miura(g)));
}
BENCHMARK(BM_QuasiMiuraFlow)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

static void BM_StandardForm(benchmark::State& st) {
    auto qm = quasi_miura(2, MappingFamily::hodge);
    for (auto _ : st) benchmark::DoNotOptimize(to_standard_form(qm, 2));
}
BENCHMARK(BM_StandardForm)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_Correspondence(benchmark::State& st) {
    auto c = st.range(0) ? Correspondence::bgw : Correspondence::gue;
    for (auto _ : st) benchmark::DoNotOptimize(verify_correspondence(c, 5, 2));
}
BENCHMARK(BM_Correspondence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
