#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Dense symmetric eigensolver: Householder tridiagonalization followed by
/// implicit-shift QL iteration, with accumulated transformations.
namespace dense {

/// Householder reduction of symmetric a (n x n, row-major) to tridiagonal
/// form; a is overwritten with the accumulated orthogonal matrix.
inline void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
    auto A = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    A(j, i) = A(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
                    for (int k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
                    e[j] = g / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = A(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) A(j, k) -= f * e[k] + g * A(i, k);
                }
            }
        } else {
            e[i] = A(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += A(i, k) * A(k, j);
                for (int k = 0; k <= l; ++k) A(k, j) -= g * A(k, i);
            }
        }
        d[i] = A(i, i);
        A(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) A(j, i) = A(i, j) = 0.0;
    }
}

/// Implicit-shift QL on a tridiagonal (d, e); z accumulates the rotations
/// (columns become eigenvectors). e[0..n-2] holds the off-diagonal on entry
/// in positions 1..n-1 as produced by tridiagonalize.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                        int n) {
    auto Z = [&](int i, int j) -> double& { return z[std::size_t(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw Error("ql_implicit: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = Z(k, i + 1);
                        Z(k, i + 1) = s * Z(k, i) + c * f;
                        Z(k, i) = c * Z(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

struct SymEig {
    std::vector<double> values;   ///< ascending
    std::vector<double> vectors;  ///< row-major, column j = eigenvector j
    int n = 0;
};

/// Full eigendecomposition of a dense symmetric matrix (standard problem).
inline SymEig sym_eig(std::vector<double> a, int n) {
    SymEig out;
    out.n = n;
    std::vector<double> d, e;
    tridiagonalize(a, n, d, e);
    ql_implicit(d, e, a, n);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
    out.values.resize(n);
    out.vectors.assign(std::size_t(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) out.vectors[std::size_t(i) * n + j] = a[std::size_t(i) * n + idx[j]];
    }
    return out;
}

/// Dense lower Cholesky, in place. Throws FactorizationFailed if not SPD.
inline void cholesky_lower(std::vector<double>& m, int n) {
    auto M = [&](int i, int j) -> double& { return m[std::size_t(i) * n + j]; };
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(M(i, i)));
    for (int j = 0; j < n; ++j) {
        double diag = M(j, j);
        for (int k = 0; k < j; ++k) diag -= M(j, k) * M(j, k);
        if (!(diag > 1e-14 * scale)) throw FactorizationFailed("dense Cholesky: not positive definite");
        const double ljj = std::sqrt(diag);
        M(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double acc = M(i, j);
            for (int k = 0; k < j; ++k) acc -= M(i, k) * M(j, k);
            M(i, j) = acc / ljj;
        }
        for (int i = 0; i < j; ++i) M(i, j) = 0.0;
    }
}

/// Generalized symmetric-definite eigenproblem K x = lambda M x via
/// congruence with the mass Cholesky factor: C = L^{-1} K L^{-T}.
/// Returned vectors are M-orthonormal.
inline SymEig generalized_eig(const std::vector<double>& K, std::vector<double> M, int n) {
    cholesky_lower(M, n);  // M now holds L
    auto L = [&](int i, int j) { return M[std::size_t(i) * n + j]; };
    // W = L^{-1} K (forward solve per column)
    std::vector<double> W(K);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i) {
            double acc = W[std::size_t(i) * n + c];
            for (int k = 0; k < i; ++k) acc -= L(i, k) * W[std::size_t(k) * n + c];
            W[std::size_t(i) * n + c] = acc / L(i, i);
        }
    // C = W L^{-T}: C^T = L^{-1} W^T, then transpose; C symmetric.
    std::vector<double> C(std::size_t(n) * n);
    for (int c = 0; c < n; ++c) {  // c indexes rows of W (columns of W^T)
        for (int i = 0; i < n; ++i) {
            double acc = W[std::size_t(c) * n + i];  // (W^T)(i, c)
            for (int k = 0; k < i; ++k) acc -= L(i, k) * C[std::size_t(c) * n + k];
            C[std::size_t(c) * n + i] = acc / L(i, i);
        }
    }
    // symmetrize to kill round-off drift
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * (C[std::size_t(i) * n + j] + C[std::size_t(j) * n + i]);
            C[std::size_t(i) * n + j] = C[std::size_t(j) * n + i] = v;
        }
    SymEig eig = sym_eig(std::move(C), n);
    // back-transform columns: x = L^{-T} z
    for (int c = 0; c < n; ++c)
        for (int i = n - 1; i >= 0; --i) {
            double acc = eig.vectors[std::size_t(i) * n + c];
            for (int k = i + 1; k < n; ++k) acc -= L(k, i) * eig.vectors[std::size_t(k) * n + c];
            eig.vectors[std::size_t(i) * n + c] = acc / L(i, i);
        }
    return eig;
}

} // namespace dense
} // namespace stripspec
