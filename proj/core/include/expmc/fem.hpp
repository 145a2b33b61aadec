// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "expmc/mlmc.hpp"
#include "expmc/sparse.hpp"

namespace expmc {

/// Lumped-mass finite element system M u' = -K u + F, u(0) = u0.
struct FemSystem {
    std::vector<double> mass_diag;
    SparseMatrix stiffness;
    std::vector<double> load;
    std::vector<double> u0;

    index_t size() const { return stiffness.size(); }
};

/// Reads mass (Matrix Market, must be diagonal and positive), stiffness
/// (Matrix Market) and the load / initial vectors (whitespace-separated).
/// The generator -M^{-1} K is never materialized; decomposition applies the
/// row scaling on the fly.
FemSystem load_fem_system(const std::string& mass_path, const std::string& stiffness_path,
                          const std::string& load_path, const std::string& u0_path);

/// Composite Simpson coefficients (1, 4, 2, ..., 2, 4, 1) / 3 over an even
/// number of panels; the caller multiplies by the step size.
std::vector<double> simpson_weights(index_t panels);

/// u(node, t) for the inhomogeneous system: multilevel estimate of the
/// initial-value propagation plus the Duhamel integral, all quadrature nodes
/// evaluated on the single terminal-time path set.
MlmcResult solve_convdiff_point(const FemSystem& sys, index_t node, double t,
                                const MlmcOptions& options);

}  // namespace expmc
