// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/communicability.hpp"

#include <vector>

namespace expmc {

MlmcResult total_communicability(const SparseMatrix& a, std::optional<double> beta,
                                 const MlmcOptions& options) {
    const ChainDecomposition dec_t = decompose(a.transposed());
    const std::vector<double> ones(static_cast<std::size_t>(a.size()), 1.0);

    MlmcProblem problem;
    problem.dec = &dec_t;
    problem.u = ones;
    problem.beta = beta ? *beta : spectral_scale(dec_t);
    problem.mode = SampleMode::forward;
    return mlmc_driver(problem, options);
}

MlmcResult node_communicability(const SparseMatrix& a, index_t node, std::optional<double> beta,
                                const MlmcOptions& options) {
    const ChainDecomposition dec = decompose(a);
    const std::vector<double> ones(static_cast<std::size_t>(a.size()), 1.0);

    MlmcProblem problem;
    problem.dec = &dec;
    problem.u = ones;
    problem.entry = node;
    problem.beta = beta ? *beta : spectral_scale(dec);
    problem.mode = SampleMode::entry;
    return mlmc_driver(problem, options);
}

}  // namespace expmc
