// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace expmc::detail {

// Samples are grouped into fixed chunks by absolute sample index and the
// per-chunk accumulators are combined in ascending chunk order, so results
// are bitwise independent of the worker count. Changing this constant
// changes results.
inline constexpr std::uint64_t kChunk = 512;

inline int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

template <class Acc, class Fn>
Acc parallel_samples(std::uint64_t start, std::uint64_t count, int threads, Fn&& fn) {
    Acc total{};
    if (count == 0) return total;
    const std::uint64_t first_chunk = start / kChunk;
    const std::uint64_t last_chunk = (start + count - 1) / kChunk;
    const std::int64_t n_chunks = static_cast<std::int64_t>(last_chunk - first_chunk + 1);
    std::vector<Acc> partial(static_cast<std::size_t>(n_chunks));

#ifdef _OPENMP
    const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::uint64_t chunk = first_chunk + static_cast<std::uint64_t>(c);
        const std::uint64_t lo = std::max(start, chunk * kChunk);
        const std::uint64_t hi = std::min(start + count, (chunk + 1) * kChunk);
        Acc acc{};
        for (std::uint64_t s = lo; s < hi; ++s) fn(s, acc);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    for (const Acc& a : partial) total.combine(a);
    return total;
}

/// Plain power sums (the level-statistics accumulator).
struct SumAcc {
    double sum = 0.0;
    double sum_sq = 0.0;
    double extra = 0.0;  // side channel (load-integral part of fem samples)
    std::uint64_t cost = 0;
    std::uint64_t n = 0;

    void add(double x, std::uint64_t c) {
        sum += x;
        sum_sq += x * x;
        cost += c;
        ++n;
    }
    void combine(const SumAcc& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        extra += o.extra;
        cost += o.cost;
        n += o.n;
    }
};

/// Welford accumulator with Chan's pairwise merge.
struct WelfordAcc {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t cost = 0;

    void add(double x, std::uint64_t c) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
        cost += c;
    }
    void combine(const WelfordAcc& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double delta = o.mean - mean;
        const double total = static_cast<double>(n + o.n);
        mean += delta * (static_cast<double>(o.n) / total);
        m2 += o.m2 + delta * delta * (static_cast<double>(n) * static_cast<double>(o.n) / total);
        n += o.n;
        cost += o.cost;
    }
    double variance() const { return n > 1 ? std::max(0.0, m2 / static_cast<double>(n - 1)) : 0.0; }
};

}  // namespace expmc::detail
