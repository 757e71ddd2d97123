#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "stripspec/errors.hpp"
#include "stripspec/sparse.hpp"

namespace stripspec {

/// Cholesky factorization A = L L^T in packed lower-band storage.
/// Tensor-grid assemblies have bandwidth n_u + 2, so a band solver is the
/// natural sparse factorization here.
class BandedCholesky {
  public:
    explicit BandedCholesky(const SparseSymMatrix& A) : n_(A.dim()), bw_(A.bandwidth()) {
        f_.assign(std::size_t(n_) * (bw_ + 1), 0.0);
        const auto& rp = A.row_ptr();
        const auto& cols = A.col();
        const auto& vals = A.values();
        for (int r = 0; r < n_; ++r)
            for (int p = rp[r]; p < rp[r + 1]; ++p)
                if (cols[p] <= r) at(r, cols[p]) = vals[p];

        double scale = 0.0;
        for (int i = 0; i < n_; ++i) scale = std::max(scale, std::abs(at(i, i)));
        for (int j = 0; j < n_; ++j) {
            double diag = at(j, j);
            const int k0 = std::max(0, j - bw_);
            for (int k = k0; k < j; ++k) diag -= at(j, k) * at(j, k);
            if (!(diag > 1e-14 * scale))
                throw FactorizationFailed("banded Cholesky: nonpositive pivot at row " +
                                          std::to_string(j));
            const double ljj = std::sqrt(diag);
            at(j, j) = ljj;
            const int iend = std::min(n_ - 1, j + bw_);
            for (int i = j + 1; i <= iend; ++i) {
                double acc = at(i, j);
                const int kk0 = std::max(0, i - bw_);
                for (int k = std::max(kk0, k0); k < j; ++k) acc -= at(i, k) * at(j, k);
                at(i, j) = acc / ljj;
            }
        }
    }

    int dim() const { return n_; }

    void solve(std::span<const double> b, std::span<double> x) const {
        // forward: L y = b
        for (int i = 0; i < n_; ++i) {
            double acc = b[i];
            const int k0 = std::max(0, i - bw_);
            for (int k = k0; k < i; ++k) acc -= at(i, k) * x[k];
            x[i] = acc / at(i, i);
        }
        // backward: L^T x = y
        for (int i = n_ - 1; i >= 0; --i) {
            double acc = x[i];
            const int kend = std::min(n_ - 1, i + bw_);
            for (int k = i + 1; k <= kend; ++k) acc -= at(k, i) * x[k];
            x[i] = acc / at(i, i);
        }
    }

  private:
    double& at(int i, int j) { return f_[std::size_t(i) * (bw_ + 1) + (j - i + bw_)]; }
    double at(int i, int j) const { return f_[std::size_t(i) * (bw_ + 1) + (j - i + bw_)]; }

    int n_;
    int bw_;
    std::vector<double> f_;
};

} // namespace stripspec
