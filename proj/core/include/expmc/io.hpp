// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expmc/mlmc.hpp"
#include "expmc/sparse.hpp"

namespace expmc {

/// Matrix Market coordinate reader: real general or symmetric, 1-based
/// indices, % comments. Symmetric files are expanded to full storage,
/// duplicates summed. Errors carry the offending line number.
SparseMatrix read_matrix_market(const std::string& path);

/// Writes coordinate format; symmetric = true stores the lower triangle
/// under a symmetric header (the matrix must actually be symmetric).
void write_matrix_market(const SparseMatrix& m, const std::string& path, bool symmetric = false);

/// Whitespace/newline-separated reals. Empty files are an error.
std::vector<double> read_vector(const std::string& path);
void write_vector(std::span<const double> v, const std::string& path);

/// Common run parameters echoed into every result.
struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = auto
    double epsilon = 1e-3;
    double beta = 0.0;
    bool beta_auto = true;
    int l0 = -1;  // -1 = auto
    std::string mode;
    std::string instance;

    bool operator==(const RunConfig&) const = default;
};

struct ResultLevelRow {
    int level = 0;
    double dt = 0.0;
    std::uint64_t samples = 0;
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t cost = 0;

    bool operator==(const ResultLevelRow&) const = default;
};

/// Serialized outcome of one estimator run. Wall time is informational only
/// and excluded from determinism guarantees.
struct ResultRecord {
    double estimate = 0.0;
    double statistical_error = 0.0;
    double bias_estimate = 0.0;
    std::uint64_t total_cost = 0;
    double wall_time_seconds = 0.0;
    bool converged = false;
    std::vector<ResultLevelRow> levels;
    RunConfig config;

    bool operator==(const ResultRecord&) const = default;
};

enum class ResultFormat { json, csv };

ResultRecord make_record(const MlmcResult& result, double beta, const RunConfig& config,
                         double wall_seconds);

std::string format_result(const ResultRecord& record, ResultFormat format);
ResultRecord parse_result(const std::string& text, ResultFormat format);

void write_result(const ResultRecord& record, const std::string& path, ResultFormat format);
ResultRecord read_result(const std::string& path, ResultFormat format);

}  // namespace expmc
