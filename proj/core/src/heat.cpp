// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/heat.hpp"

#include <cmath>
#include <stdexcept>

namespace expmc {

namespace {

index_t interior_index(index_t nx, index_t ix, index_t iy, index_t iz) {
    const index_t m = nx - 1;
    return (ix - 1) + m * ((iy - 1) + m * (iz - 1));
}

}  // namespace

Heat3DSystem build_heat3d(const Grid3D& grid,
                          const std::function<double(double, double, double)>& initial) {
    if (grid.nx < 2) throw std::invalid_argument("grid needs nx >= 2");
    const index_t nx = grid.nx;
    const index_t m = nx - 1;
    const index_t n = m * m * m;
    const double h = grid.spacing();

    Heat3DSystem sys;
    sys.scale = 1.0 / (h * h);
    sys.u0.resize(static_cast<std::size_t>(n));

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(7 * n));
    for (index_t iz = 1; iz < nx; ++iz)
        for (index_t iy = 1; iy < nx; ++iy)
            for (index_t ix = 1; ix < nx; ++ix) {
                const index_t row = interior_index(nx, ix, iy, iz);
                sys.u0[static_cast<std::size_t>(row)] =
                    initial(-grid.delta + static_cast<double>(ix) * h,
                            -grid.delta + static_cast<double>(iy) * h,
                            -grid.delta + static_cast<double>(iz) * h);
                trips.push_back({row, row, -6.0});
                if (ix > 1) trips.push_back({row, interior_index(nx, ix - 1, iy, iz), 1.0});
                if (ix < m) trips.push_back({row, interior_index(nx, ix + 1, iy, iz), 1.0});
                if (iy > 1) trips.push_back({row, interior_index(nx, ix, iy - 1, iz), 1.0});
                if (iy < m) trips.push_back({row, interior_index(nx, ix, iy + 1, iz), 1.0});
                if (iz > 1) trips.push_back({row, interior_index(nx, ix, iy, iz - 1), 1.0});
                if (iz < m) trips.push_back({row, interior_index(nx, ix, iy, iz + 1), 1.0});
            }
    sys.laplacian = SparseMatrix::from_triplets(n, std::move(trips));
    return sys;
}

index_t heat3d_node_index(const Grid3D& grid, std::array<double, 3> point) {
    const double h = grid.spacing();
    index_t idx[3];
    for (int a = 0; a < 3; ++a) {
        if (std::abs(point[static_cast<std::size_t>(a)]) > grid.delta)
            throw std::domain_error("point outside the computational domain");
        const double j = (point[static_cast<std::size_t>(a)] + grid.delta) / h;
        idx[a] = std::clamp<index_t>(static_cast<index_t>(std::lround(j)), 1, grid.nx - 1);
    }
    return interior_index(grid.nx, idx[0], idx[1], idx[2]);
}

MlmcResult solve_heat_point(const Grid3D& grid,
                            const std::function<double(double, double, double)>& initial,
                            std::array<double, 3> point, double t, const MlmcOptions& options) {
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    const Heat3DSystem sys = build_heat3d(grid, initial);
    const ChainDecomposition dec = decompose(sys.laplacian);

    MlmcProblem problem;
    problem.dec = &dec;
    problem.u = sys.u0;
    problem.entry = heat3d_node_index(grid, point);
    problem.beta = t * sys.scale;
    problem.mode = SampleMode::entry;
    return mlmc_driver(problem, options);
}

}  // namespace expmc
