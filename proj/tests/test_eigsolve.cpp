#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stripspec/assemble.hpp"
#include "stripspec/curvature.hpp"
#include "stripspec/dense_eig.hpp"
#include "stripspec/eigsolve.hpp"
#include "stripspec/transverse.hpp"

using namespace stripspec;

namespace {

FormAssembly tiny_diag(const std::vector<double>& kdiag) {
    const int n = int(kdiag.size());
    std::vector<int> rows(n), cols(n);
    std::vector<double> kv(n), mv(n, 1.0);
    for (int i = 0; i < n; ++i) {
        rows[i] = cols[i] = i;
        kv[i] = kdiag[i];
    }
    FormAssembly fa;
    fa.dim = n;
    fa.K = SparseSymMatrix::from_triplets(n, rows, cols, kv);
    fa.M = SparseSymMatrix::from_triplets(n, rows, cols, mv);
    fa.dof_of_node.resize(n);
    for (int i = 0; i < n; ++i) fa.dof_of_node[i] = i;
    return fa;
}

} // namespace

TEST(DenseEig, HandProblem2x2) {
    FormAssembly fa = tiny_diag({2.0, 3.0});
    auto res = dense_oracle(fa);
    ASSERT_EQ(res.count(), 2);
    EXPECT_NEAR(res.eigenvalues[0], 2.0, 1e-14);
    EXPECT_NEAR(res.eigenvalues[1], 3.0, 1e-14);
}

TEST(DenseEig, Interval1DLaplacianClosedForm) {
    // uniform P1 stiffness/mass pair on [0,1], Dirichlet: the discrete
    // eigenvalues are (6/h^2)(1-cos k pi h)/(2+cos k pi h)
    const int n = 50;
    SampledFunction zero = sample([](double) { return 0.0; }, -0.5, 0.5, n);
    FormAssembly fa = assemble_1d_schrodinger(zero, 0.5, n);
    auto res = dense_oracle(fa);
    const double h = 1.0 / n;
    for (int k = 1; k <= 10; ++k) {
        const double c = std::cos(k * std::numbers::pi * h);
        const double exact = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
        EXPECT_NEAR(res.eigenvalues[k - 1], exact, 1e-10 * exact);
    }
}

TEST(DenseEig, GeneralizedAgainstCongruenceIdentity) {
    // random-ish small SPD pair built from a 1-D assembly with potential
    SampledFunction pot = sample([](double s) { return -1.0 + 0.3 * s * s; }, -2.0, 2.0, 24);
    FormAssembly fa = assemble_1d_schrodinger(pot, 2.0, 24);
    auto res = dense_oracle(fa);
    // residuals near machine precision, eigenvalues ascending, vectors M-orthonormal
    for (int i = 0; i < res.count(); ++i) EXPECT_LT(res.residuals[i], 1e-10);
    for (int i = 1; i < res.count(); ++i) EXPECT_GE(res.eigenvalues[i], res.eigenvalues[i - 1]);
    const int n = fa.dim;
    std::vector<double> mx(n);
    for (int a = 0; a < std::min(4, n); ++a)
        for (int b = 0; b <= a; ++b) {
            fa.M.multiply({res.vectors[b].data(), size_t(n)}, {mx.data(), size_t(n)});
            double dot = 0.0;
            for (int t = 0; t < n; ++t) dot += res.vectors[a][t] * mx[t];
            EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-8);
        }
}

TEST(SmallestEigs, DiagonalProblem) {
    FormAssembly fa = tiny_diag({5.0, 1.0, 4.0, 2.5, 7.0, 3.0, 9.0, 6.0});
    auto res = smallest_eigs(fa, 3, 1e-10);
    ASSERT_TRUE(res.converged);
    EXPECT_NEAR(res.eigenvalues[0], 1.0, 1e-9);
    EXPECT_NEAR(res.eigenvalues[1], 2.5, 1e-9);
    EXPECT_NEAR(res.eigenvalues[2], 3.0, 1e-9);
}

TEST(SmallestEigs, MatchesDenseOracle) {
    auto profile = CurvatureProfile::compact_bump(-1.2, 0.0, 0.5);
    Grid g = build_grid(3.0, 0.4, 36, 10);
    FormAssembly fa = assemble_forms(profile, g, BoundaryType::D, EndBC::DirichletEnds);
    ASSERT_LE(fa.dim, 2000);
    auto fast = smallest_eigs(fa, 5, 1e-10);
    auto oracle = dense_oracle(fa);
    ASSERT_TRUE(fast.converged);
    for (int i = 0; i < 5; ++i)
        EXPECT_NEAR(fast.eigenvalues[i], oracle.eigenvalues[i],
                    1e-9 * std::abs(oracle.eigenvalues[i]));
}

TEST(SmallestEigs, StraightStripConvergesToTransverseEigenvalue) {
    auto zero = CurvatureProfile::zero();
    const double d = 1.0, S = 10.0;
    std::vector<double> lams;
    for (int scale : {1, 2, 4}) {
        Grid g = build_grid(S, d, 80 * scale, 4 * scale);
        FormAssembly fa = assemble_forms(zero, g, BoundaryType::D, EndBC::DirichletEnds);
        auto res = smallest_eigs(fa, 1, 1e-9);
        ASSERT_TRUE(res.converged);
        lams.push_back(res.eigenvalues[0]);
    }
    const double e1 = transverse_eigenvalue(BoundaryType::D, 1, d);
    for (double l : lams) EXPECT_GT(l, e1);  // from above
    const double order = std::log2((lams[0] - lams[1]) / (lams[1] - lams[2]));
    EXPECT_GT(order, 1.8);
    EXPECT_LT(std::abs(lams[2] - e1) / e1, 0.01);
}

TEST(SmallestEigs, DeterministicAcrossRuns) {
    auto profile = CurvatureProfile::compact_bump(-0.8, 0.0, 0.5);
    Grid g = build_grid(4.0, 0.3, 40, 8);
    FormAssembly fa = assemble_forms(profile, g, BoundaryType::DN, EndBC::DirichletEnds);
    auto a = smallest_eigs(fa, 3, 1e-10, 1234);
    auto b = smallest_eigs(fa, 3, 1e-10, 1234);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(a.eigenvalues[i], b.eigenvalues[i]);
    // different seed agrees to solver tolerance
    auto c = smallest_eigs(fa, 3, 1e-10, 99);
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(a.eigenvalues[i], c.eigenvalues[i], 1e-8 * std::abs(a.eigenvalues[i]));
}

TEST(SmallestEigs, NonnegativeSpectra) {
    auto profile = CurvatureProfile::compact_bump(-0.8, 0.0, 0.5);
    Grid g = build_grid(4.0, 0.3, 40, 8);
    for (auto iota : {BoundaryType::D, BoundaryType::N, BoundaryType::DN}) {
        FormAssembly fa = assemble_forms(profile, g, iota, EndBC::NeumannEnds);
        auto res = smallest_eigs(fa, 3, 1e-9);
        ASSERT_TRUE(res.converged);
        EXPECT_GE(res.eigenvalues[0], -1e-10 * fa.K.max_abs_diag());
    }
}

TEST(CountBelow, ScreensAndThrows) {
    FormAssembly fa = tiny_diag({1.0, 2.0, 3.0, 10.0});
    auto res = dense_oracle(fa);
    EXPECT_EQ(count_below(res, 5.0, 1e-3), 3);
    EXPECT_EQ(count_below(res, 3.0, 1e-3), 2);  // 3.0 sits inside the margin band
    EXPECT_THROW(count_below(res, 11.0, 1e-3), InsufficientPairs);
    SpectralResult bad;
    bad.converged = false;
    EXPECT_THROW(count_below(bad, 1.0, 1e-3), DomainError);
}

TEST(CountBelow, StraightStripHasNoBoundStates) {
    auto zero = CurvatureProfile::zero();
    Grid g = build_grid(6.0, 1.0, 96, 10);
    FormAssembly fa = assemble_forms(zero, g, BoundaryType::D, EndBC::DirichletEnds);
    auto res = smallest_eigs(fa, 4, 1e-9);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(count_below(res, essential_threshold(BoundaryType::D, 1.0), 1e-3), 0);
}
