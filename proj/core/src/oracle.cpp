// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expmc {

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double one_norm(const SparseMatrix& a) {
    std::vector<double> col(static_cast<std::size_t>(a.size()), 0.0);
    const auto cols = a.col_idx();
    const auto vals = a.values();
    for (std::size_t k = 0; k < vals.size(); ++k)
        col[static_cast<std::size_t>(cols[k])] += std::abs(vals[k]);
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

}  // namespace

std::vector<double> dense_expmv(const SparseMatrix& a, std::span<const double> u, double beta) {
    const index_t n = a.size();
    if (static_cast<index_t>(u.size()) != n)
        throw std::invalid_argument("vector length does not match matrix dimension");
    if (n > 5000) throw std::invalid_argument("dense_expmv is limited to n <= 5000");

    const double norm = std::abs(beta) * one_norm(a);
    const std::int64_t stages = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(norm)));
    const double h = beta / static_cast<double>(stages);

    std::vector<double> x(u.begin(), u.end());
    std::vector<double> term(x.size());
    std::vector<double> next(x.size());

    // Each stage: x <- sum_k (h A)^k x / k!, ||h A||_1 <= 1 so ~20 terms reach
    // machine precision; 64 caps pathological non-normality.
    for (std::int64_t s = 0; s < stages; ++s) {
        term = x;
        double ref = max_abs(x);
        for (int k = 1; k <= 64; ++k) {
            a.multiply(term, next);
            const double c = h / static_cast<double>(k);
            for (std::size_t i = 0; i < term.size(); ++i) term[i] = c * next[i];
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += term[i];
            const double t = max_abs(term);
            ref = std::max(ref, max_abs(x));
            if (t <= 1e-17 * ref) break;
        }
    }
    return x;
}

SparseMatrix chain_t_matrix(const ChainDecomposition& dec) {
    std::vector<Triplet> trips;
    trips.reserve(dec.jump_target.size() + static_cast<std::size_t>(dec.n));
    for (index_t i = 0; i < dec.n; ++i) {
        const double r = dec.rate[static_cast<std::size_t>(i)];
        if (r != 0.0) trips.push_back({i, i, r});
        for (index_t k = dec.row_ptr[i]; k < dec.row_ptr[i + 1]; ++k) {
            const std::size_t ku = static_cast<std::size_t>(k);
            const double w = dec.jump_weight[ku];
            // t_ij = -a_ij for j != i
            trips.push_back({i, dec.jump_target[ku], dec.sign[ku] ? w : -w});
        }
    }
    return SparseMatrix::from_triplets(dec.n, std::move(trips));
}

std::vector<double> strang_reference(const ChainDecomposition& dec, std::span<const double> u,
                                     double beta, std::int64_t steps) {
    if (dec.n > 2000) throw std::invalid_argument("strang_reference is limited to n <= 2000");
    if (steps < 1 || (steps & (steps - 1)) != 0)
        throw std::invalid_argument("step count must be a power of two");
    if (static_cast<index_t>(u.size()) != dec.n)
        throw std::invalid_argument("vector length does not match decomposition");

    const double dt = beta / static_cast<double>(steps);
    const SparseMatrix t = chain_t_matrix(dec);
    std::vector<double> half(static_cast<std::size_t>(dec.n));
    for (std::size_t i = 0; i < half.size(); ++i) half[i] = std::exp(0.5 * dt * dec.d[i]);

    std::vector<double> x(u.begin(), u.end());
    for (std::int64_t s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= half[i];
        x = dense_expmv(t, x, -dt);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= half[i];
    }
    return x;
}

}  // namespace expmc
