// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expmc/chain.hpp"
#include "expmc/paths.hpp"

namespace expmc {

/// Running statistics of one multilevel level. At the base level the samples
/// are the fine functional P_{l0}; above it they are coupled differences
/// P_l - P_{l-1}.
struct LevelStats {
    int level = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t cost = 0;  // model units: exponential draws + fine steps

    double mean() const { return samples ? sum / static_cast<double>(samples) : 0.0; }
    /// Sample variance from the power sums, clamped at zero.
    double variance() const;
    double unit_cost() const {
        return samples ? static_cast<double>(cost) / static_cast<double>(samples) : 0.0;
    }
};

struct MlmcResult {
    double estimate = 0.0;
    double statistical_error = 0.0;  // sqrt(sum_l V_l / M_l)
    double bias_estimate = 0.0;
    double quadrature_bound = 0.0;  // load-integral share of the tail (fem runs)
    std::vector<LevelStats> levels;
    int l0 = 0;
    int L = 0;
    std::uint64_t total_cost = 0;
    bool converged = false;
};

enum class SampleMode { entry, forward, fem };

/// What the estimator runs on. `dec` is the decomposition of A for entry and
/// fem modes and of A^T for forward mode; `load` (fem only) is the
/// mass-scaled load vector M^{-1} F.
struct MlmcProblem {
    const ChainDecomposition* dec = nullptr;
    std::span<const double> u;
    std::span<const double> load;
    index_t entry = 0;
    double beta = 1.0;
    SampleMode mode = SampleMode::entry;
};

struct MlmcOptions {
    double epsilon = 1e-3;
    std::uint64_t seed = 0;
    int threads = 0;        // 0 = all hardware threads
    int l0_override = -1;   // -1: initial_level heuristic
    std::uint64_t warmup = 1000;
    int max_levels_above_l0 = 30;
    int max_iterations = 200;
};

/// Practical initial level l0 = max(0, round(log2(2 beta d_max))); 0 when
/// d_max <= 0.
int initial_level(double beta, double d_max);

/// Lagrange-optimal per-level sample counts targeting total variance
/// eps^2 / 2: M_l = ceil((2/eps^2) sqrt(V_l/C_l) sum_k sqrt(V_k C_k)),
/// at least 2 each.
std::vector<std::uint64_t> optimal_allocation(std::span<const double> variances,
                                              std::span<const double> unit_costs, double epsilon);

/// Geometric-tail bound on the remaining bias from the coupled-level means
/// m_{l0+1}..m_L (order alpha = 2): max(|m_L|, |m_{L-1}|/4) / 3.
double bias_estimate(std::span<const double> coupled_means);

/// Extends one level by `additional` fresh samples whose indices continue at
/// `first_index`, so repeated extension is deterministic and non-overlapping.
/// Pass base_level = true at l0 (plain fine functional, no coupling).
LevelStats run_level(const MlmcProblem& problem, int level, bool base_level,
                     std::uint64_t first_index, std::uint64_t additional, std::uint64_t seed,
                     int threads = 0);

/// The adaptive multilevel driver: warm start at L = l0 + 4, loop of optimal
/// reallocation and level extension until sqrt(V_T) <= eps/sqrt(2) and the
/// bias bound <= eps/sqrt(2). Non-convergence at the level cap returns a
/// partial result with converged = false.
MlmcResult mlmc_driver(const MlmcProblem& problem, const MlmcOptions& options);

/// Predicted sampling cost alpha_in beta d_bar M + alpha_out (beta/dt) M.
double cost_model(double beta, double d_bar, double dt, double samples, double alpha_in,
                  double alpha_out);

}  // namespace expmc
