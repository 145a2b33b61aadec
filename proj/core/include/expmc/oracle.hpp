// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "expmc/chain.hpp"
#include "expmc/sparse.hpp"

namespace expmc {

/// Reference x = e^{beta A} u by scaling plus truncated Taylor series applied
/// to the vector. The scaling keeps every stage at ||beta A / s||_1 <= 1, so
/// the series has no cancellation growth and the result is accurate to about
/// 1e-13 relative in the max norm for ||beta A||_1 up to 1e4.
/// Intended for verification at desk scale (n <= 5000).
std::vector<double> dense_expmv(const SparseMatrix& a, std::span<const double> u, double beta);

/// Deterministic Strang product (e^{dt D/2} e^{-dt T} e^{dt D/2})^N u with
/// dt = beta / N, evaluated densely per step (e^{-dt T} via dense_expmv).
/// This is the quantity the path functionals are unbiased for at step dt.
/// N must be a power of two; n <= 2000.
std::vector<double> strang_reference(const ChainDecomposition& dec, std::span<const double> u,
                                     double beta, std::int64_t steps);

/// The matrix T of the split A = D - T (diagonal rate_i, off-diagonal -a_ij).
SparseMatrix chain_t_matrix(const ChainDecomposition& dec);

}  // namespace expmc
