// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "expmc/mlmc.hpp"
#include "expmc/sparse.hpp"

namespace expmc {

/// Total communicability sum_i (e^{beta A} 1)_i by forward-mode MLMC on the
/// transpose decomposition. beta defaults to the spectral scale 1/d_max
/// (computed from the transpose split; identical for the symmetric
/// adjacency matrices these runs target).
MlmcResult total_communicability(const SparseMatrix& a, std::optional<double> beta,
                                 const MlmcOptions& options);

/// Single-node communicability (e^{beta A} 1)_i by entry-mode MLMC.
MlmcResult node_communicability(const SparseMatrix& a, index_t node, std::optional<double> beta,
                                const MlmcOptions& options);

}  // namespace expmc
