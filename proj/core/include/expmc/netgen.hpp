// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "expmc/sparse.hpp"

namespace expmc {

/// Parameters of the synthetic test graphs. Defaults match the regimes the
/// communicability benchmarks assume (small maximum degree for smallw,
/// hub-dominated tails for pref).
struct GraphSpec {
    enum class Kind { smallw, pref };
    Kind kind = Kind::smallw;
    index_t n = 1000;
    index_t ring_neighbors = 2;     // k, per side (smallw)
    double shortcut_prob = 0.1;     // p (smallw)
    index_t edges_per_node = 2;     // d (pref)
    std::uint64_t seed = 0;
};

/// Watts–Strogatz-style small world: ring lattice joining each node to its k
/// nearest neighbours per side, then one shortcut per node with probability p
/// to a uniformly random non-neighbour. Symmetric 0/1 adjacency, zero
/// diagonal. Requires n >= 3, 1 <= k, 2k < n.
SparseMatrix smallw(index_t n, index_t k, double p, std::uint64_t seed);

/// Preferential attachment: d-clique seed, then each new node attaches d
/// edges to distinct existing nodes with probability proportional to current
/// degree. Symmetric 0/1 adjacency, zero diagonal.
SparseMatrix pref(index_t n, index_t d, std::uint64_t seed);

SparseMatrix generate(const GraphSpec& spec);

}  // namespace expmc
