// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expmc {

namespace {

ChainDecomposition decompose_impl(const SparseMatrix& a, std::span<const double> row_scale) {
    const index_t n = a.size();
    ChainDecomposition dec;
    dec.n = n;
    dec.d.resize(static_cast<std::size_t>(n));
    dec.rate.resize(static_cast<std::size_t>(n));
    dec.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    dec.jump_cdf.reserve(static_cast<std::size_t>(a.nnz()));
    dec.jump_target.reserve(static_cast<std::size_t>(a.nnz()));
    dec.sign.reserve(static_cast<std::size_t>(a.nnz()));
    dec.jump_weight.reserve(static_cast<std::size_t>(a.nnz()));

    double d_sum = 0.0;
    double d_max = -std::numeric_limits<double>::infinity();
    for (index_t i = 0; i < n; ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_vals(i);
        const double scale = row_scale.empty() ? 1.0 : row_scale[static_cast<std::size_t>(i)];
        if (!std::isfinite(scale)) throw std::invalid_argument("row scale is NaN or Inf");

        double diag = 0.0;
        double rate = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double v = scale * vals[k];
            if (!std::isfinite(v)) throw std::invalid_argument("matrix entry is NaN or Inf");
            if (cols[k] == i) {
                diag = v;
                continue;
            }
            if (v == 0.0) continue;  // scaled-to-zero entries vanish
            const double w = std::abs(v);
            rate += w;
            dec.jump_weight.push_back(w);
            dec.jump_cdf.push_back(rate);  // rescaled below
            dec.jump_target.push_back(cols[k]);
            dec.sign.push_back(v < 0.0 ? 1 : 0);
        }
        dec.rate[static_cast<std::size_t>(i)] = rate;
        const double di = diag + rate;
        dec.d[static_cast<std::size_t>(i)] = di;
        dec.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(dec.jump_target.size());
        d_sum += di;
        d_max = std::max(d_max, di);

        // Turn the running weight sums into a CDF; last entry exactly 1.
        if (rate > 0.0) {
            const index_t begin = dec.row_ptr[static_cast<std::size_t>(i)];
            const index_t end = dec.row_ptr[static_cast<std::size_t>(i) + 1];
            for (index_t k = begin; k < end - 1; ++k)
                dec.jump_cdf[static_cast<std::size_t>(k)] /= rate;
            dec.jump_cdf[static_cast<std::size_t>(end) - 1] = 1.0;
        }
    }
    dec.d_max = n > 0 ? d_max : 0.0;
    dec.d_bar = n > 0 ? d_sum / static_cast<double>(n) : 0.0;
    return dec;
}

}  // namespace

ChainDecomposition decompose(const SparseMatrix& a) { return decompose_impl(a, {}); }

ChainDecomposition decompose_scaled(const SparseMatrix& a, std::span<const double> row_scale) {
    if (static_cast<index_t>(row_scale.size()) != a.size())
        throw std::invalid_argument("row scale length does not match matrix dimension");
    return decompose_impl(a, row_scale);
}

SparseMatrix reconstruct(const ChainDecomposition& dec) {
    std::vector<Triplet> trips;
    trips.reserve(dec.jump_target.size() + static_cast<std::size_t>(dec.n));
    for (index_t i = 0; i < dec.n; ++i) {
        const double diag = dec.d[static_cast<std::size_t>(i)] - dec.rate[static_cast<std::size_t>(i)];
        if (diag != 0.0) trips.push_back({i, i, diag});
        for (index_t k = dec.row_ptr[i]; k < dec.row_ptr[i + 1]; ++k) {
            const std::size_t ku = static_cast<std::size_t>(k);
            const double w = dec.jump_weight[ku];
            trips.push_back({i, dec.jump_target[ku], dec.sign[ku] ? -w : w});
        }
    }
    return SparseMatrix::from_triplets(dec.n, std::move(trips));
}

double spectral_scale(const ChainDecomposition& dec) {
    if (!(dec.d_max > 0.0))
        throw std::domain_error("d_max <= 0: no spectral scale, supply beta explicitly");
    return 1.0 / dec.d_max;
}

}  // namespace expmc
