// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace expmc {

using index_t = std::int64_t;

/// One (row, col, value) entry used to assemble a matrix.
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Square sparse matrix in compressed sparse row form.
///
/// Invariants established at construction and preserved afterwards:
///  - row_ptr is non-decreasing, row_ptr[0] == 0, row_ptr[n] == nnz
///  - column indices strictly increasing within each row, all in [0, n)
///  - no explicitly stored zeros, no NaN/Inf values
class SparseMatrix {
  public:
    SparseMatrix() = default;

    /// Assembles from coordinate entries. Duplicate (i, j) pairs are summed
    /// (Matrix Market convention); entries that sum to zero are dropped.
    static SparseMatrix from_triplets(index_t n, std::vector<Triplet> entries);

    /// Dense row-major input, zero entries skipped. Test/fixture convenience.
    static SparseMatrix from_dense(index_t n, std::span<const double> row_major);

    static SparseMatrix identity(index_t n);

    index_t size() const { return n_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    std::span<const index_t> row_ptr() const { return row_ptr_; }
    std::span<const index_t> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Column indices of row i.
    std::span<const index_t> row_cols(index_t i) const {
        return {col_idx_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }
    /// Values of row i.
    std::span<const double> row_vals(index_t i) const {
        return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }

    /// Stored value at (i, j), 0 if absent. Binary search within the row.
    double at(index_t i, index_t j) const;

    SparseMatrix transposed() const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// y = A^T x
    void multiply_transpose(std::span<const double> x, std::span<double> y) const;

    std::vector<double> to_dense() const;

    bool operator==(const SparseMatrix& other) const = default;

  private:
    index_t n_ = 0;
    std::vector<index_t> row_ptr_{0};
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace expmc
