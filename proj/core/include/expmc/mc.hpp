// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "expmc/chain.hpp"
#include "expmc/paths.hpp"

namespace expmc {

/// Classical single-level Monte Carlo estimate.
struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    double dt = 0.0;
    index_t steps = 0;
    std::uint64_t wall_cost = 0;  // model units: exponential draws + fine steps
};

/// Mean and standard error of M independent single-entry functionals at a
/// fixed step dt (beta/dt must be a positive integer). Welford accumulation
/// in fixed chunks; results are bitwise independent of the thread count.
McResult mc_single_entry(const ChainDecomposition& dec, std::span<const double> u, index_t entry,
                         double beta, double dt, std::uint64_t samples, std::uint64_t seed,
                         int threads = 0);

/// Accuracy-driven classical MC: calibrates the splitting-bias constant with
/// one Richardson comparison of two pilot step sizes, picks the largest
/// dt = beta/2^k with c dt^2 <= eps/2, sizes M = ceil(2 V / eps^2) from the
/// pilot variance, then runs mc_single_entry.
McResult mc_auto(const ChainDecomposition& dec, std::span<const double> u, index_t entry,
                 double beta, double epsilon, std::uint64_t seed, int threads = 0);

/// Forward-mode scalar estimate of sum_i (e^{beta A} u)_i; `dec_transpose`
/// is the decomposition of A^T and u must be nonnegative.
McResult mc_forward_scalar(const ChainDecomposition& dec_transpose, std::span<const double> u,
                           double beta, double dt, std::uint64_t samples, std::uint64_t seed,
                           int threads = 0);

}  // namespace expmc
