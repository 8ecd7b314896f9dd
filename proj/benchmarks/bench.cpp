#include <benchmark/benchmark.h>

#include <vector>

#include "gpolar/design.hpp"
#include "gpolar/dmc.hpp"
#include "gpolar/group.hpp"
#include "gpolar/rng.hpp"
#include "gpolar/sc.hpp"
#include "gpolar/transform.hpp"

namespace {

using namespace gpolar;

const AbelianGroup& z2() {
    static AbelianGroup g = build_group({2});
    return g;
}

const AbelianGroup& z4() {
    static AbelianGroup g = build_group({4});
    return g;
}

Dmc bsc(const AbelianGroup& g, double p) {
    return Dmc(&g, OutputAlphabet::single("y", 2), {1.0 - p, p, p, 1.0 - p});
}

void BM_group_add(benchmark::State& state) {
    const AbelianGroup& g = z4();
    int acc = 0;
    for (auto _ : state) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) acc += g.add(a, b);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_group_add);

void BM_transform(benchmark::State& state) {
    const AbelianGroup& g = z4();
    int size = static_cast<int>(state.range(0));
    Rng rng(7);
    Block b{&g, std::vector<int>(size)};
    for (int& v : b.data) v = rng.uniform_int(4);
    for (auto _ : state) {
        Block out = transform(b);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(state.iterations() * size);
}
BENCHMARK(BM_transform)->Arg(256)->Arg(4096);

void BM_sc_decode(benchmark::State& state) {
    const AbelianGroup& g = z2();
    Dmc w = bsc(g, 0.1);
    int n = static_cast<int>(state.range(0));
    int size = 1 << n;
    Rng rng(11);
    std::vector<int> obs(size);
    for (int& v : obs) v = rng.uniform_int(2);
    for (auto _ : state) {
        ScEngine eng(g, n, leaf_logliks(w, obs), true);
        for (int i = 0; i < size; ++i) {
            const std::vector<double>& row = eng.index_loglik(i);
            eng.commit(i, row[0] >= row[1] ? 0 : 1);
        }
        benchmark::DoNotOptimize(eng.codeword().data());
    }
    state.SetItemsProcessed(state.iterations() * size);
}
BENCHMARK(BM_sc_decode)->Arg(8)->Arg(10);

void BM_estimate_params(benchmark::State& state) {
    const AbelianGroup& g = z2();
    Dmc w = bsc(g, 0.1);
    for (auto _ : state) {
        IndexParams p = estimate_index_params(w, 6, EstimationMode::monte_carlo, 1000, 13);
        benchmark::DoNotOptimize(p.zh.data());
    }
}
BENCHMARK(BM_estimate_params);

}  // namespace

BENCHMARK_MAIN();
