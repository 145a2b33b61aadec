// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expmc {

SparseMatrix SparseMatrix::from_triplets(index_t n, std::vector<Triplet> entries) {
    if (n < 0) throw std::invalid_argument("matrix dimension must be nonnegative");
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::out_of_range("triplet index outside [0, n)");
        if (!std::isfinite(t.value))
            throw std::invalid_argument("matrix entry is NaN or Inf");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    m.col_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t k = 0;
    while (k < entries.size()) {
        const index_t i = entries[k].row;
        const index_t j = entries[k].col;
        double v = entries[k].value;
        ++k;
        while (k < entries.size() && entries[k].row == i && entries[k].col == j) {
            v += entries[k].value;
            ++k;
        }
        if (v != 0.0) {
            m.col_idx_.push_back(j);
            m.values_.push_back(v);
            m.row_ptr_[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(m.values_.size());
        }
    }
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i)
        m.row_ptr_[i] = std::max(m.row_ptr_[i], m.row_ptr_[i - 1]);
    return m;
}

SparseMatrix SparseMatrix::from_dense(index_t n, std::span<const double> row_major) {
    if (static_cast<index_t>(row_major.size()) != n * n)
        throw std::invalid_argument("dense buffer size does not match n*n");
    std::vector<Triplet> trips;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            const double v = row_major[static_cast<std::size_t>(i * n + j)];
            if (v != 0.0) trips.push_back({i, j, v});
        }
    return from_triplets(n, std::move(trips));
}

SparseMatrix SparseMatrix::identity(index_t n) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) trips.push_back({i, i, 1.0});
    return from_triplets(n, std::move(trips));
}

double SparseMatrix::at(index_t i, index_t j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("index outside matrix");
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(row_ptr_[i] + (it - cols.begin()))];
}

SparseMatrix SparseMatrix::transposed() const {
    SparseMatrix t;
    t.n_ = n_;
    t.row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    t.col_idx_.resize(values_.size());
    t.values_.resize(values_.size());

    for (index_t j : col_idx_) ++t.row_ptr_[static_cast<std::size_t>(j) + 1];
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n_); ++i) t.row_ptr_[i] += t.row_ptr_[i - 1];

    std::vector<index_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    for (index_t i = 0; i < n_; ++i) {
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const index_t j = col_idx_[static_cast<std::size_t>(k)];
            const index_t dst = next[static_cast<std::size_t>(j)]++;
            t.col_idx_[static_cast<std::size_t>(dst)] = i;
            t.values_[static_cast<std::size_t>(dst)] = values_[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<index_t>(x.size()) != n_ || static_cast<index_t>(y.size()) != n_)
        throw std::invalid_argument("vector length does not match matrix dimension");
    for (index_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            acc += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(i)] = acc;
    }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
    if (static_cast<index_t>(x.size()) != n_ || static_cast<index_t>(y.size()) != n_)
        throw std::invalid_argument("vector length does not match matrix dimension");
    std::fill(y.begin(), y.end(), 0.0);
    for (index_t i = 0; i < n_; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        if (xi == 0.0) continue;
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            y[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])] += values_[static_cast<std::size_t>(k)] * xi;
    }
}

std::vector<double> SparseMatrix::to_dense() const {
    std::vector<double> d(static_cast<std::size_t>(n_ * n_), 0.0);
    for (index_t i = 0; i < n_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            d[static_cast<std::size_t>(i * n_ + col_idx_[static_cast<std::size_t>(k)])] = values_[static_cast<std::size_t>(k)];
    return d;
}

}  // namespace expmc
