#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "stripspec/assemble.hpp"
#include "stripspec/banded_cholesky.hpp"
#include "stripspec/curvature.hpp"
#include "stripspec/eigsolve.hpp"
#include "stripspec/grid.hpp"
#include "stripspec/sparse.hpp"

using namespace stripspec;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Grid, BasicSpacing) {
    Grid g = build_grid(5.0, 1.0, 10, 4);
    EXPECT_DOUBLE_EQ(g.h_s(), 1.0);
    EXPECT_DOUBLE_EQ(g.h_u(), 0.25);
    EXPECT_EQ(g.node_count(), 11 * 5);
    EXPECT_EQ(build_grid(5.0, 1.0, 20, 8).cell_count(), 4 * g.cell_count());
    EXPECT_THROW(build_grid(5.0, 1.0, 3, 4), std::invalid_argument);
    EXPECT_THROW(build_grid(5.0, 1.0, 10, 1), std::invalid_argument);
}

TEST(Sparse, TripletsAndMultiply) {
    // [[2, -1], [-1, 2]] with a duplicate entry summed
    auto A = SparseSymMatrix::from_triplets(2, {0, 0, 0, 1, 1}, {0, 1, 0, 0, 1},
                                            {1.0, -1.0, 1.0, -1.0, 2.0});
    EXPECT_EQ(A.nnz(), 4u);
    std::vector<double> x{1.0, 2.0}, y(2);
    A.multiply(x, y);
    EXPECT_DOUBLE_EQ(y[0], 0.0);
    EXPECT_DOUBLE_EQ(y[1], 3.0);
    EXPECT_EQ(A.symmetry_error(), 0.0);
    EXPECT_EQ(A.bandwidth(), 1);
    std::ostringstream os;
    A.write_matrix_market(os);
    EXPECT_NE(os.str().find("%%MatrixMarket"), std::string::npos);
    EXPECT_NE(os.str().find("2 2 3"), std::string::npos);
}

TEST(BandedCholeskySolver, SolvesSpd) {
    // tridiagonal SPD from the 1-D Laplacian
    std::vector<int> r, c;
    std::vector<double> v;
    const int n = 40;
    for (int i = 0; i < n; ++i) {
        r.push_back(i); c.push_back(i); v.push_back(2.0);
        if (i) {
            r.push_back(i); c.push_back(i - 1); v.push_back(-1.0);
            r.push_back(i - 1); c.push_back(i); v.push_back(-1.0);
        }
    }
    auto A = SparseSymMatrix::from_triplets(n, r, c, v);
    BandedCholesky f(A);
    std::vector<double> b(n, 1.0), x(n), y(n);
    f.solve(b, x);
    A.multiply(x, y);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(y[i], 1.0, 1e-11);
    // indefinite matrix must be rejected
    v[0] = -5.0;
    auto B = SparseSymMatrix::from_triplets(n, r, c, v);
    EXPECT_THROW(BandedCholesky{B}, FactorizationFailed);
}

TEST(Assemble, MassPartitionOfUnity) {
    // k = 0, no eliminated dofs: sum of all M entries = area = 2 S d
    Grid g = build_grid(5.0, 1.0, 16, 4);
    FormAssembly fa = assemble_forms(CurvatureProfile::zero(), g, BoundaryType::N,
                                     EndBC::NeumannEnds);
    EXPECT_NEAR(fa.M.sum(), 2.0 * 5.0 * 1.0, 1e-12 * 10.0);
    EXPECT_EQ(fa.dim, g.node_count());
    EXPECT_LT(fa.K.symmetry_error(), 1e-15);
    EXPECT_LT(fa.M.symmetry_error(), 1e-15);
}

TEST(Assemble, DofCountsPerBoundaryType) {
    Grid g = build_grid(2.0, 0.5, 8, 4);
    auto p = CurvatureProfile::zero();
    const int ns = g.n_s + 1, nu = g.n_u + 1;
    EXPECT_EQ(assemble_forms(p, g, BoundaryType::N, EndBC::NeumannEnds).dim, ns * nu);
    EXPECT_EQ(assemble_forms(p, g, BoundaryType::DN, EndBC::NeumannEnds).dim, ns * (nu - 1));
    EXPECT_EQ(assemble_forms(p, g, BoundaryType::D, EndBC::NeumannEnds).dim, ns * (nu - 2));
    EXPECT_EQ(assemble_forms(p, g, BoundaryType::D, EndBC::DirichletEnds).dim,
              (ns - 2) * (nu - 2));
}

TEST(Assemble, ThinnessGuard) {
    Grid g = build_grid(2.0, 1.0, 8, 4);
    auto p = CurvatureProfile::compact_bump(1.5, 0.0, 1.0, 2);
    EXPECT_THROW(assemble_forms(p, g, BoundaryType::D, EndBC::DirichletEnds),
                 HypothesisViolated);
    // negative curvature of any size is fine
    auto pm = CurvatureProfile::compact_bump(-4.0, 0.0, 1.0, 2);
    EXPECT_NO_THROW(assemble_forms(pm, g, BoundaryType::D, EndBC::DirichletEnds));
}

TEST(Assemble, StraightCoarseGridBoundsE1FromAbove) {
    Grid g = build_grid(4.0, 1.0, 24, 4);
    FormAssembly fa = assemble_forms(CurvatureProfile::zero(), g, BoundaryType::D,
                                     EndBC::DirichletEnds);
    auto res = dense_oracle(fa);
    EXPECT_GE(res.eigenvalues[0], transverse_eigenvalue(BoundaryType::D, 1, 1.0));
}

TEST(Assemble, MidpointCoefficientsMatchGaussOracle) {
    // per-cell high-order Gauss quadrature of the same bilinear integrands;
    // the midpoint-coefficient entries must agree to O(h^2)
    auto profile = CurvatureProfile::compact_bump(-0.8, 0.1, 0.9, 4);
    auto entry_error = [&](int scale) {
        Grid g = build_grid(1.5, 0.4, 6 * scale, 4 * scale);
        FormAssembly fa = assemble_forms(profile, g, BoundaryType::N, EndBC::NeumannEnds);
        // rebuild with 5x5 Gauss per cell, exact bilinear basis
        const double gp[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
        const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
        const double hs = g.h_s(), hu = g.h_u();
        std::vector<int> rows, cols;
        std::vector<double> kv;
        for (int i = 0; i < g.n_s; ++i)
            for (int j = 0; j < g.n_u; ++j) {
                const double s0 = g.s(i), u0 = g.u(j);
                double ke[4][4] = {};
                for (int qa = 0; qa < 5; ++qa)
                    for (int qb = 0; qb < 5; ++qb) {
                        const double xs = 0.5 * (gp[qa] + 1.0);  // in [0,1]
                        const double xu = 0.5 * (gp[qb] + 1.0);
                        const double w = gw[qa] * gw[qb] * 0.25 * hs * hu;
                        const double cc = 1.0 - (u0 + xu * hu) * profile(s0 + xs * hs);
                        const double bs_[2] = {1.0 - xs, xs};
                        const double bu_[2] = {1.0 - xu, xu};
                        const double ds_[2] = {-1.0 / hs, 1.0 / hs};
                        const double du_[2] = {-1.0 / hu, 1.0 / hu};
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b) {
                                const int as = a >> 1, au = a & 1, bs2 = b >> 1, bu2 = b & 1;
                                ke[a][b] += w * (ds_[as] * bu_[au] * ds_[bs2] * bu_[bu2] / cc +
                                                 bs_[as] * du_[au] * bs_[bs2] * du_[bu2] * cc);
                            }
                    }
                const int n00 = g.node(i, j);
                const int nd[4] = {n00, n00 + 1, n00 + g.n_u + 1, n00 + g.n_u + 2};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) {
                        rows.push_back(nd[a]);
                        cols.push_back(nd[b]);
                        kv.push_back(ke[a][b]);
                    }
            }
        auto Kg = SparseSymMatrix::from_triplets(g.node_count(), rows, cols, kv);
        // max relative entry difference
        double err = 0.0;
        const auto& rp = fa.K.row_ptr();
        for (int r = 0; r < fa.K.dim(); ++r)
            for (int p = rp[r]; p < rp[r + 1]; ++p) {
                const auto& rp2 = Kg.row_ptr();
                for (int q = rp2[r]; q < rp2[r + 1]; ++q)
                    if (Kg.col()[q] == fa.K.col()[p])
                        err = std::max(err, std::abs(Kg.values()[q] - fa.K.values()[p]) /
                                                std::max(1.0, std::abs(Kg.values()[q])));
            }
        return err;
    };
    const double e1 = entry_error(2);
    const double e2 = entry_error(4);
    EXPECT_GT(e1 / e2, 3.0);  // O(h^2) entry consistency
}

TEST(Assemble, EndBcNestingRaisesDirichlet) {
    auto p = CurvatureProfile::compact_bump(-0.9, 0.0, 0.5, 2);
    Grid g = build_grid(3.0, 0.3, 48, 6);
    auto fd = assemble_forms(p, g, BoundaryType::D, EndBC::DirichletEnds);
    auto fn = assemble_forms(p, g, BoundaryType::D, EndBC::NeumannEnds);
    auto rd = smallest_eigs(fd, 1, 1e-10);
    auto rn = smallest_eigs(fn, 1, 1e-10);
    EXPECT_GE(rd.eigenvalues[0], rn.eigenvalues[0] - 1e-10);
}

TEST(Assemble, BoundaryConditionNesting) {
    auto p = CurvatureProfile::compact_bump(-0.9, 0.0, 0.5, 2);
    Grid g = build_grid(3.0, 0.3, 48, 6);
    double lam[3];
    int idx = 0;
    for (auto iota : {BoundaryType::D, BoundaryType::DN, BoundaryType::N}) {
        auto fa = assemble_forms(p, g, iota, EndBC::DirichletEnds);
        lam[idx++] = smallest_eigs(fa, 1, 1e-10).eigenvalues[0];
    }
    EXPECT_GE(lam[0], lam[1] - 1e-10);  // D >= DN
    EXPECT_GE(lam[1], lam[2] - 1e-10);  // DN >= N
}

TEST(Assemble, DomainMonotonicityInS) {
    auto p = CurvatureProfile::compact_bump(-0.9, 0.0, 0.5, 2);
    double prev = 1e300;
    for (int scale : {1, 2, 4}) {
        Grid g = build_grid(1.5 * scale, 0.3, 24 * scale, 6);
        auto fa = assemble_forms(p, g, BoundaryType::DN, EndBC::DirichletEnds);
        const double lam = smallest_eigs(fa, 1, 1e-10).eigenvalues[0];
        EXPECT_LE(lam, prev + 1e-12);
        prev = lam;
    }
}

TEST(Assemble1D, ZeroPotentialIntervalLaplacian) {
    const double S = 4.0;
    double prev_err = 1e300;
    for (int n : {100, 200, 400}) {
        auto pot = sample([](double) { return 0.0; }, -S, S, n);
        auto fa = assemble_1d_schrodinger(pot, S, n);
        const double lam = smallest_eigs(fa, 1, 1e-11).eigenvalues[0];
        const double err = std::abs(lam - std::pow(pi / (2.0 * S), 2));
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-6);
}

TEST(Assemble1D, ConstantPotentialIsExactShift) {
    const double S = 3.0, V = 0.7;
    const int n = 60;
    auto zero = sample([](double) { return 0.0; }, -S, S, n);
    auto shift = sample([&](double) { return -V; }, -S, S, n);
    auto a = dense_oracle(assemble_1d_schrodinger(zero, S, n));
    auto b = dense_oracle(assemble_1d_schrodinger(shift, S, n));
    for (int i = 0; i < a.count(); ++i)
        EXPECT_NEAR(b.eigenvalues[i], a.eigenvalues[i] - V, 1e-11 * std::max(1.0, a.eigenvalues[i]));
}

TEST(Assemble, SpectrumReflectionSymmetryInS) {
    // mirroring the profile in s permutes the grid: identical spectra
    auto p = CurvatureProfile::compact_bump(-0.9, 0.4, 0.5, 2);
    auto pm = CurvatureProfile::compact_bump(-0.9, -0.4, 0.5, 2);
    Grid g = build_grid(3.0, 0.3, 40, 6);
    auto ra = smallest_eigs(assemble_forms(p, g, BoundaryType::DN, EndBC::DirichletEnds), 3, 1e-11);
    auto rb = smallest_eigs(assemble_forms(pm, g, BoundaryType::DN, EndBC::DirichletEnds), 3, 1e-11);
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(ra.eigenvalues[i], rb.eigenvalues[i], 1e-12 * std::abs(ra.eigenvalues[i]));
}
