#include <benchmark/benchmark.h>

#include "mapl/mapl.hpp"

using namespace mapl;

namespace {

HypothesisClass random_class(std::size_t n_domain, std::size_t k, std::size_t size) {
    Rng rng(42);
    return gen_random_class(n_domain, k, size, rng);
}

void BM_Orientation(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = OneInclusionGraph::build(gen_random_vertices(n, 3, static_cast<std::size_t>(state.range(1)), rng), n);
    for (auto _ : state) benchmark::DoNotOptimize(min_max_outdegree_orientation(g).max_out_degree);
    state.counters["vertices"] = static_cast<double>(g.vertices().size());
}
BENCHMARK(BM_Orientation)->Args({4, 40})->Args({6, 200})->Args({8, 1000});

void BM_Natarajan(benchmark::State& state) {
    const auto h = random_class(static_cast<std::size_t>(state.range(0)), 3, 60);
    for (auto _ : state) benchmark::DoNotOptimize(natarajan_dimension(h, 4).dimension);
}
BENCHMARK(BM_Natarajan)->Arg(4)->Arg(8);

void BM_DsDimension(benchmark::State& state) {
    const auto h = random_class(static_cast<std::size_t>(state.range(0)), 3, 60);
    for (auto _ : state) benchmark::DoNotOptimize(ds_dimension(h, 4).dimension);
}
BENCHMARK(BM_DsDimension)->Arg(4)->Arg(8);

void BM_OigLearn(benchmark::State& state) {
    const auto h = random_class(10, 3, 80);
    Rng rng(3);
    SampleSequence s;
    for (int i = 0; i < state.range(0); ++i) {
        const auto x = static_cast<Instance>(rng.uniform_index(10));
        s.push_back({x, h[5](x)});
    }
    for (auto _ : state) {
        OrientationCache cache;
        benchmark::DoNotOptimize(oig_learn(s, h, &cache));
    }
}
BENCHMARK(BM_OigLearn)->Arg(2)->Arg(4)->Arg(8);

void BM_ScsrCompress(benchmark::State& state) {
    const auto h = random_class(8, 3, 40);
    Rng rng(4);
    SampleSequence s;
    for (int i = 0; i < state.range(0); ++i) {
        const auto x = static_cast<Instance>(rng.uniform_index(8));
        s.push_back({x, h[7](x)});
    }
    CompressionParams params;
    params.d_weak = weak_size(h, params);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(scsr_compress(s, h, params, seed++));
}
BENCHMARK(BM_ScsrCompress)->Arg(20)->Arg(100);

void BM_MaplHardConstants(benchmark::State& state) {
    const auto [h, p] = gen_appendix_a(11, 300);
    const auto s = sample(p, static_cast<std::size_t>(state.range(0)), 5);
    MaplConfig cfg;
    for (auto _ : state) {
        ++cfg.seed;
        benchmark::DoNotOptimize(mapl::mapl(s, h, cfg).hypothesis);
    }
}
BENCHMARK(BM_MaplHardConstants)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
