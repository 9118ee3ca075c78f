// Microbenchmarks for the two loss kernels and the search hot loop.
//
//   ./wsdt_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "wsdt/data.hpp"
#include "wsdt/objective.hpp"
#include "wsdt/search.hpp"
#include "wsdt/weights.hpp"

namespace {

wsdt::BinarizedDataset synthetic(std::size_t n, std::size_t columns, bool unit_weights,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    wsdt::BinarizedDataset ds;
    ds.labels.resize(n);
    for (auto& l : ds.labels) l = static_cast<std::uint32_t>(rng() & 1);
    ds.label_names = {"0", "1"};
    ds.weights.resize(n);
    double total = 0.0;
    for (auto& w : ds.weights) {
        w = unit_weights ? 1.0 : 0.5 + static_cast<double>(rng() % 100) / 25.0;
        total += w;
    }
    ds.total_weight = total;
    ds.unit_weights = unit_weights;
    for (std::size_t j = 0; j < columns; ++j) {
        wsdt::BitVector bits(n);
        for (std::size_t i = 0; i < n; ++i)
            if (rng() & 1) bits.set(i);
        ds.columns.push_back(std::move(bits));
        ds.origins.push_back(
            wsdt::ColumnOrigin{j, "f" + std::to_string(j), wsdt::FeatureKind::Numeric, 0.5, {}});
    }
    return ds;
}

void BM_BitcountSweep(benchmark::State& state) {
    const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 50, true, 7);
    const wsdt::LossKernel kernel(ds, wsdt::KernelMode::Bitcount);
    for (auto _ : state) benchmark::DoNotOptimize(wsdt::loss_mass_sweep(kernel));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 50);
}
BENCHMARK(BM_BitcountSweep)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_WeightedDotSweep(benchmark::State& state) {
    const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 50, false, 7);
    const wsdt::LossKernel kernel(ds, wsdt::KernelMode::WeightedDot);
    for (auto _ : state) benchmark::DoNotOptimize(wsdt::loss_mass_sweep(kernel));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 50);
}
BENCHMARK(BM_WeightedDotSweep)->Arg(10000)->Arg(100000)->Arg(1000000);

// Fig.2-style cell: duplicated bitcount sweep at (1 + q/100) * N rows.
void BM_DuplicatedSweep(benchmark::State& state) {
    const std::size_t n = 100000;
    const int q = static_cast<int>(state.range(0));
    auto base = synthetic(n, 50, true, 7);
    std::vector<double> weights(n, 1.0);
    const std::uint64_t extra = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(q) / 100;
    for (std::uint64_t e = 0; e < extra; ++e) weights[e % n] += 1.0;
    wsdt::DupCounts counts;
    counts.counts.assign(weights.begin(), weights.end());
    counts.total = 0;
    for (auto c : counts.counts) counts.total += c;
    const auto duplicated = wsdt::duplicate_binarized(base, counts);
    const wsdt::LossKernel kernel(duplicated, wsdt::KernelMode::Bitcount);
    for (auto _ : state) benchmark::DoNotOptimize(wsdt::loss_mass_sweep(kernel));
}
BENCHMARK(BM_DuplicatedSweep)->Arg(0)->Arg(100)->Arg(1000);

void BM_ExactSearch(benchmark::State& state) {
    const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 10, true, 11);
    wsdt::SearchConfig cfg;
    cfg.lambda = 0.01;
    cfg.depth_limit = 3;
    cfg.kernel = wsdt::KernelMode::Bitcount;
    for (auto _ : state) benchmark::DoNotOptimize(wsdt::optimize(ds, cfg).objective_value);
}
BENCHMARK(BM_ExactSearch)->Arg(200)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
