#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Symmetric sparse matrix in CSR layout; both triangles stored.
class SparseSymMatrix {
  public:
    SparseSymMatrix() = default;

    /// Builds CSR from triplets, summing duplicates. Deterministic for a
    /// fixed triplet order.
    static SparseSymMatrix from_triplets(int n, const std::vector<int>& rows,
                                         const std::vector<int>& cols,
                                         const std::vector<double>& vals) {
        SparseSymMatrix A;
        A.n_ = n;
        const std::size_t nnz_in = vals.size();
        std::vector<std::size_t> order(nnz_in);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
        });
        A.row_ptr_.assign(n + 1, 0);
        int prev_r = -1, prev_c = -1;
        for (std::size_t t : order) {
            if (rows[t] == prev_r && cols[t] == prev_c) {
                A.val_.back() += vals[t];
            } else {
                prev_r = rows[t];
                prev_c = cols[t];
                A.col_.push_back(prev_c);
                A.val_.push_back(vals[t]);
                ++A.row_ptr_[prev_r + 1];
            }
        }
        for (int r = 0; r < n; ++r) A.row_ptr_[r + 1] += A.row_ptr_[r];
        return A;
    }

    int dim() const { return n_; }
    std::size_t nnz() const { return val_.size(); }
    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col() const { return col_; }
    const std::vector<double>& values() const { return val_; }
    std::vector<double>& values() { return val_; }

    void multiply(std::span<const double> x, std::span<double> y) const {
        for (int r = 0; r < n_; ++r) {
            double acc = 0.0;
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += val_[p] * x[col_[p]];
            y[r] = acc;
        }
    }

    double sum() const {
        double acc = 0.0;
        for (double v : val_) acc += v;
        return acc;
    }

    double max_abs_diag() const {
        double m = 0.0;
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                if (col_[p] == r) m = std::max(m, std::abs(val_[p]));
        return m;
    }

    /// max |a_ij - a_ji|, for symmetry checks.
    double symmetry_error() const {
        double err = 0.0;
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
                const int c = col_[p];
                if (c < r) continue;
                double mirror = 0.0;
                for (int q = row_ptr_[c]; q < row_ptr_[c + 1]; ++q)
                    if (col_[q] == r) { mirror = val_[q]; break; }
                err = std::max(err, std::abs(val_[p] - mirror));
            }
        return err;
    }

    bool same_pattern(const SparseSymMatrix& o) const {
        return n_ == o.n_ && row_ptr_ == o.row_ptr_ && col_ == o.col_;
    }

    /// K + shift*M for matrices with identical pattern.
    static SparseSymMatrix shifted(const SparseSymMatrix& K, double shift,
                                   const SparseSymMatrix& M) {
        if (!K.same_pattern(M))
            throw std::invalid_argument("SparseSymMatrix::shifted: pattern mismatch");
        SparseSymMatrix A = K;
        for (std::size_t i = 0; i < A.val_.size(); ++i) A.val_[i] += shift * M.val_[i];
        return A;
    }

    int bandwidth() const {
        int bw = 0;
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                bw = std::max(bw, std::abs(col_[p] - r));
        return bw;
    }

    std::vector<double> dense() const {
        std::vector<double> D(std::size_t(n_) * n_, 0.0);
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                D[std::size_t(r) * n_ + col_[p]] = val_[p];
        return D;
    }

    /// Plain-text triplet dump (matrix-market style) for debugging.
    void write_matrix_market(std::ostream& os) const {
        os << "%%MatrixMarket matrix coordinate real symmetric\n";
        std::size_t upper = 0;
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                if (col_[p] <= r) ++upper;
        os << n_ << " " << n_ << " " << upper << "\n";
        char buf[64];
        for (int r = 0; r < n_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
                if (col_[p] > r) continue;
                std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, col_[p] + 1, val_[p]);
                os << buf;
            }
    }

  private:
    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
};

} // namespace stripspec
