// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "expmc/mc.hpp"
#include "expmc/mlmc.hpp"

namespace expmc {

/// Least-squares slope of log2(y) against x (y must be positive; rows with
/// y <= 0 are skipped).
double fit_log2_slope(std::span<const double> x, std::span<const double> y);
/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct LevelDecayRow {
    int level = 0;
    double dt = 0.0;
    double mean = 0.0;      // coupled difference mean m_l
    double variance = 0.0;  // V_l
    double cost_per_sample = 0.0;
};

struct LevelDecayReport {
    std::vector<LevelDecayRow> rows;  // coupled levels l0+1 .. l0+count
    double slope_mean = 0.0;          // log2 |m_l| vs l
    double slope_variance = 0.0;      // log2 V_l vs l
    double slope_cost_tail = 0.0;     // log2 cost/sample vs l, top half of the rows
};

/// Fixed-M decay study of the coupled-level means, variances and unit costs.
LevelDecayReport bench_levels(const MlmcProblem& problem, int l0, int count,
                              std::uint64_t samples, std::uint64_t seed, int threads = 0);

struct ComplexityPoint {
    double epsilon = 0.0;
    double cost = 0.0;
    double wall_seconds = 0.0;
};

struct ComplexityReport {
    std::vector<ComplexityPoint> mlmc;
    std::vector<ComplexityPoint> mc;
    double slope_mlmc = 0.0;  // log cost vs log eps
    double slope_mc = 0.0;
};

/// Cost-versus-accuracy sweep of the multilevel driver against the classical
/// estimator on the same single-entry problem.
ComplexityReport bench_complexity(const MlmcProblem& problem, std::span<const double> epsilons,
                                  std::uint64_t seed, int threads = 0);

struct L0Point {
    int l0 = 0;
    double cost = 0.0;
};

struct L0Report {
    std::vector<L0Point> points;
    int best_l0 = 0;       // argmin of measured cost
    int heuristic_l0 = 0;  // round(log2(2 beta d_max))
};

/// Total-cost sweep over forced initial levels at fixed accuracy.
L0Report bench_l0(const MlmcProblem& problem, int l0_min, int l0_max, double epsilon,
                  std::uint64_t seed, int threads = 0);

void write_level_decay_csv(const LevelDecayReport& report, const std::string& path);
void write_complexity_csv(const ComplexityReport& report, const std::string& path);
void write_l0_csv(const L0Report& report, const std::string& path);

}  // namespace expmc
