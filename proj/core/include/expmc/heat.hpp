// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "expmc/mlmc.hpp"
#include "expmc/sparse.hpp"

namespace expmc {

/// Cube [-delta, delta]^3 split into nx panels per axis: grid points
/// x_j = -delta + j * spacing, j = 0..nx, of which j = 1..nx-1 are interior.
struct Grid3D {
    index_t nx = 2;
    double delta = 1.0;
    double spacing() const { return 2.0 * delta / static_cast<double>(nx); }
};

/// Dimensionless 7-point Laplacian on the (nx-1)^3 interior nodes with the
/// Dirichlet boundary eliminated; e^{t scale A} u0 solves the heat equation,
/// scale = 1/spacing^2 = nx^2/(4 delta^2). Nodes are ordered
/// lexicographically, x fastest.
struct Heat3DSystem {
    SparseMatrix laplacian;
    std::vector<double> u0;
    double scale = 1.0;
};

Heat3DSystem build_heat3d(const Grid3D& grid,
                          const std::function<double(double, double, double)>& initial);

/// Interior node nearest to a physical point; throws if the point lies
/// outside [-delta, delta]^3.
index_t heat3d_node_index(const Grid3D& grid, std::array<double, 3> point);

/// Heat-equation value u(point, t) by the multilevel estimator at the nearest
/// interior node (epsilon, seed, threads via options).
MlmcResult solve_heat_point(const Grid3D& grid,
                            const std::function<double(double, double, double)>& initial,
                            std::array<double, 3> point, double t, const MlmcOptions& options);

}  // namespace expmc
