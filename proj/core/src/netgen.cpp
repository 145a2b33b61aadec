// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/netgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "expmc/rng.hpp"

namespace expmc {

namespace {

constexpr std::uint32_t kNetgenLane = 3;

SparseMatrix adjacency_from_lists(index_t n, const std::vector<std::vector<index_t>>& nbrs) {
    std::vector<Triplet> trips;
    std::size_t edges = 0;
    for (const auto& list : nbrs) edges += list.size();
    trips.reserve(edges);
    for (index_t i = 0; i < n; ++i)
        for (index_t j : nbrs[static_cast<std::size_t>(i)]) trips.push_back({i, j, 1.0});
    return SparseMatrix::from_triplets(n, std::move(trips));
}

}  // namespace

SparseMatrix smallw(index_t n, index_t k, double p, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("smallw needs n >= 3");
    if (k < 1 || 2 * k >= n) throw std::invalid_argument("smallw needs 1 <= k and 2k < n");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("shortcut probability outside [0, 1]");

    std::vector<std::vector<index_t>> nbrs(static_cast<std::size_t>(n));
    for (index_t v = 0; v < n; ++v)
        for (index_t o = 1; o <= k; ++o) {
            const index_t w = (v + o) % n;
            nbrs[static_cast<std::size_t>(v)].push_back(w);
            nbrs[static_cast<std::size_t>(w)].push_back(v);
        }

    auto connected = [&](index_t v, index_t w) {
        const auto& list = nbrs[static_cast<std::size_t>(v)];
        return std::find(list.begin(), list.end(), w) != list.end();
    };
    for (index_t v = 0; v < n; ++v) {
        RngStream stream = stream_for(seed, /*level=*/0, static_cast<std::uint64_t>(v), kNetgenLane);
        if (stream.next_uniform() >= p) continue;
        for (;;) {
            const index_t w = static_cast<index_t>(stream.next_uniform() * static_cast<double>(n));
            if (w == v || w >= n || connected(v, w)) continue;
            nbrs[static_cast<std::size_t>(v)].push_back(w);
            nbrs[static_cast<std::size_t>(w)].push_back(v);
            break;
        }
    }
    return adjacency_from_lists(n, nbrs);
}

SparseMatrix pref(index_t n, index_t d, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("pref needs n >= 3");
    if (d < 1 || d >= n) throw std::invalid_argument("pref needs 1 <= d < n");

    std::vector<std::vector<index_t>> nbrs(static_cast<std::size_t>(n));
    std::vector<index_t> endpoints;  // every edge contributes both ends
    endpoints.reserve(2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(d));

    for (index_t i = 0; i < d; ++i)
        for (index_t j = i + 1; j < d; ++j) {
            nbrs[static_cast<std::size_t>(i)].push_back(j);
            nbrs[static_cast<std::size_t>(j)].push_back(i);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }

    std::vector<index_t> picked;
    picked.reserve(static_cast<std::size_t>(d));
    for (index_t v = std::max<index_t>(d, 1); v < n; ++v) {
        RngStream stream = stream_for(seed, /*level=*/1, static_cast<std::uint64_t>(v), kNetgenLane);
        // Degrees frozen at the state before this node's edges are added, so
        // a node never attaches to itself.
        const std::size_t snapshot = endpoints.size();
        picked.clear();
        while (static_cast<index_t>(picked.size()) < std::min(d, v)) {
            index_t t;
            if (snapshot == 0) {
                t = static_cast<index_t>(stream.next_uniform() * static_cast<double>(v));
                if (t >= v) t = v - 1;
            } else {
                std::size_t pos =
                    static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(snapshot));
                if (pos >= snapshot) pos = snapshot - 1;
                t = endpoints[pos];
            }
            if (std::find(picked.begin(), picked.end(), t) != picked.end()) continue;
            picked.push_back(t);
        }
        for (index_t t : picked) {
            nbrs[static_cast<std::size_t>(v)].push_back(t);
            nbrs[static_cast<std::size_t>(t)].push_back(v);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return adjacency_from_lists(n, nbrs);
}

SparseMatrix generate(const GraphSpec& spec) {
    switch (spec.kind) {
        case GraphSpec::Kind::smallw:
            return smallw(spec.n, spec.ring_neighbors, spec.shortcut_prob, spec.seed);
        case GraphSpec::Kind::pref:
            return pref(spec.n, spec.edges_per_node, spec.seed);
    }
    throw std::invalid_argument("unknown graph kind");
}

}  // namespace expmc
