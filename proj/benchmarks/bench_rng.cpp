// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "expmc/rng.hpp"

namespace {

void BM_Uniform(benchmark::State& state) {
    expmc::RngStream s = expmc::stream_for(1, 0, 0);
    double acc = 0.0;
    for (auto _ : state) acc += s.next_uniform();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Uniform);

void BM_StreamCreation(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) {
        expmc::RngStream s = expmc::stream_for(1, 3, i++);
        benchmark::DoNotOptimize(s.next_uniform());
    }
}
BENCHMARK(BM_StreamCreation);

void BM_Exponential(benchmark::State& state) {
    expmc::RngStream s = expmc::stream_for(2, 0, 0);
    double acc = 0.0;
    for (auto _ : state) acc += expmc::draw_exponential(s, 1.5);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Exponential);

}  // namespace
