// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/fem.hpp"

#include <stdexcept>

#include "expmc/io.hpp"

namespace expmc {

FemSystem load_fem_system(const std::string& mass_path, const std::string& stiffness_path,
                          const std::string& load_path, const std::string& u0_path) {
    const SparseMatrix mass = read_matrix_market(mass_path);
    FemSystem sys;
    sys.stiffness = read_matrix_market(stiffness_path);
    sys.load = read_vector(load_path);
    sys.u0 = read_vector(u0_path);

    const index_t n = sys.stiffness.size();
    if (mass.size() != n || static_cast<index_t>(sys.load.size()) != n ||
        static_cast<index_t>(sys.u0.size()) != n)
        throw std::invalid_argument("FEM system dimensions disagree");

    sys.mass_diag.assign(static_cast<std::size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i) {
        const auto cols = mass.row_cols(i);
        const auto vals = mass.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] != i)
                throw std::invalid_argument("mass matrix is not lumped (off-diagonal entry)");
            sys.mass_diag[static_cast<std::size_t>(i)] = vals[k];
        }
        if (!(sys.mass_diag[static_cast<std::size_t>(i)] > 0.0))
            throw std::invalid_argument("lumped mass must be positive on the diagonal");
    }
    return sys;
}

std::vector<double> simpson_weights(index_t panels) {
    if (panels < 2 || panels % 2 != 0)
        throw std::invalid_argument("Simpson rule needs an even panel count >= 2");
    std::vector<double> w(static_cast<std::size_t>(panels) + 1);
    for (std::size_t j = 0; j < w.size(); ++j) {
        const bool end = (j == 0 || j + 1 == w.size());
        w[j] = (end ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0)) / 3.0;
    }
    return w;
}

MlmcResult solve_convdiff_point(const FemSystem& sys, index_t node, double t,
                                const MlmcOptions& options) {
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    if (node < 0 || node >= sys.size()) throw std::out_of_range("node index outside system");

    const index_t n = sys.size();
    std::vector<double> row_scale(static_cast<std::size_t>(n));
    std::vector<double> scaled_load(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < row_scale.size(); ++i) {
        row_scale[i] = -1.0 / sys.mass_diag[i];
        scaled_load[i] = sys.load[i] / sys.mass_diag[i];
    }
    const ChainDecomposition dec = decompose_scaled(sys.stiffness, row_scale);

    MlmcProblem problem;
    problem.dec = &dec;
    problem.u = sys.u0;
    problem.load = scaled_load;
    problem.entry = node;
    problem.beta = t;
    problem.mode = SampleMode::fem;
    return mlmc_driver(problem, options);
}

}  // namespace expmc
