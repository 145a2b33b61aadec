// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expmc/sparse.hpp"

namespace expmc {

/// Sampling-ready split A = D - T of a square matrix into a diagonal shift
/// and the transpose-free generator data of a continuous-time Markov chain.
///
/// Per row i:
///   rate[i]   = sum_{j != i} |a_ij|        (holding rate; 0 marks an
///               absorbing row with holding time +inf)
///   d[i]      = a_ii + rate[i]             (diagonal shift)
///   jump_*    = off-diagonal neighbours in ascending column order with
///               cumulative probabilities |a_ij| / rate[i]; the final
///               cumulative entry is clamped to exactly 1 so inverse-CDF
///               sampling is total
///   sign      = 1 where a_ij < 0, else 0, aligned with jump_target so the
///               sampling loop gets (target, sign) from one slot
struct ChainDecomposition {
    index_t n = 0;
    std::vector<double> d;
    std::vector<double> rate;
    std::vector<index_t> row_ptr;     // offsets into the three jump arrays
    std::vector<double> jump_cdf;
    std::vector<index_t> jump_target;
    std::vector<std::uint8_t> sign;
    std::vector<double> jump_weight;  // |a_ij|, kept so reconstruction is exact
    double d_max = 0.0;
    double d_bar = 0.0;

    index_t degree(index_t i) const { return row_ptr[i + 1] - row_ptr[i]; }
};

/// Splits A into the chain form above. Throws on NaN/Inf entries.
ChainDecomposition decompose(const SparseMatrix& a);

/// Splits row_scale[i] * A (row scaling applied on the fly, the scaled matrix
/// is never materialized). Used for FEM generators -M^{-1} K.
ChainDecomposition decompose_scaled(const SparseMatrix& a, std::span<const double> row_scale);

/// Inverse of decompose: a_ii = d_i - rate_i, a_ij = (-1)^{sign} |a_ij|.
/// Exact for the off-diagonal part; the diagonal reproduces a_ii up to the
/// one rounding committed when d_i was formed.
SparseMatrix reconstruct(const ChainDecomposition& dec);

/// Default inverse temperature beta = 1 / d_max for communicability runs.
/// Throws if d_max <= 0 (caller must pick beta itself).
double spectral_scale(const ChainDecomposition& dec);

}  // namespace expmc
