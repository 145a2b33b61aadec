// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "expmc/netgen.hpp"
#include "expmc/paths.hpp"

namespace {

using namespace expmc;

struct Fixture {
    SparseMatrix a = smallw(10000, 2, 0.1, 1);
    ChainDecomposition dec = decompose(a);
    std::vector<double> u = std::vector<double>(10000, 1.0);
    double beta = spectral_scale(dec);
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

// Per-sample cost of the coupled functional across levels; the per-step
// regime appears once 2^level exceeds beta * d_bar.
void BM_CoupledSample(benchmark::State& state) {
    const Fixture& f = fixture();
    const int level = static_cast<int>(state.range(0));
    const index_t steps = index_t{1} << level;
    const LevelSampler sampler(f.dec, f.beta / static_cast<double>(steps), steps);
    std::uint64_t i = 0;
    double acc = 0.0;
    for (auto _ : state) {
        RngStream s = stream_for(7, static_cast<std::uint32_t>(level), i++);
        const CoupledSample c = sampler.coupled(f.u, 0, s);
        acc += c.eta_fine - c.eta_coarse;
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(static_cast<std::int64_t>(i) * steps);
}
BENCHMARK(BM_CoupledSample)->DenseRange(2, 10, 2);

void BM_SingleFunctional(benchmark::State& state) {
    const Fixture& f = fixture();
    const index_t steps = index_t{1} << 4;
    const LevelSampler sampler(f.dec, f.beta / static_cast<double>(steps), steps);
    std::uint64_t i = 0;
    double acc = 0.0;
    for (auto _ : state) {
        RngStream s = stream_for(8, 4, i++);
        acc += sampler.single(f.u, 0, s).value;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_SingleFunctional);

}  // namespace
