// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "expmc/netgen.hpp"
#include "expmc/oracle.hpp"

namespace {

using namespace expmc;

void BM_DenseExpmv(benchmark::State& state) {
    const index_t n = state.range(0);
    const SparseMatrix a = smallw(n, 2, 0.1, 3);
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> u(static_cast<std::size_t>(n), 1.0);
    const double beta = spectral_scale(dec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dense_expmv(a, u, beta));
    }
}
BENCHMARK(BM_DenseExpmv)->Arg(100)->Arg(1000);

}  // namespace
