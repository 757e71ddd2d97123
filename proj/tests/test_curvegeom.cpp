#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stripspec/curvature.hpp"
#include "stripspec/curve.hpp"

using namespace stripspec;

namespace {

// independent high-resolution quadrature oracle for the bending angle
double alpha_quadrature(const CurvatureProfile& p, double lo, double hi) {
    return simpson([&](double s) { return p(s); }, lo, hi, 1 << 16);
}

} // namespace

TEST(Curvature, ZeroProfileEvaluates) {
    auto p = CurvatureProfile::zero();
    EXPECT_EQ(p(3.7), 0.0);
    auto st = profile_stats(p);
    EXPECT_EQ(st.alpha, 0.0);
    EXPECT_EQ(st.sup_kplus, 0.0);
    EXPECT_EQ(st.sup_kminus, 0.0);
}

TEST(Curvature, BumpSupportAndContinuity) {
    auto p = CurvatureProfile::compact_bump(-0.5, 0.0, 2.0, 2);
    EXPECT_EQ(p(5.0), 0.0);
    EXPECT_EQ(p(2.0), 0.0);
    EXPECT_EQ(p(-2.0), 0.0);
    EXPECT_NEAR(p(0.0), -0.5, 1e-15);
    // continuity across the support edge
    EXPECT_NEAR(p(2.0 - 1e-7), 0.0, 1e-12);
    // C1: derivative vanishes at the edge
    EXPECT_NEAR((p(2.0 - 1e-7) - p(2.0 - 2e-7)) / 1e-7, 0.0, 1e-5);
}

TEST(Curvature, BumpAlphaAnalyticByConstruction) {
    // amplitude chosen so the analytic integral is exactly -0.3
    const double w = 1.5;
    const double I2 = 16.0 / 15.0;  // integral of (1-x^2)^2
    auto p = CurvatureProfile::compact_bump(-0.3 / (w * I2), 0.0, w, 2);
    EXPECT_NEAR(p.alpha(), -0.3, 1e-14);
    EXPECT_NEAR(alpha_quadrature(p, -w, w), -0.3, 1e-11);
}

TEST(Curvature, SumAdditivity) {
    const double I2 = 16.0 / 15.0;
    auto a = CurvatureProfile::compact_bump(0.2 / I2, -3.0, 1.0, 2);
    auto b = CurvatureProfile::compact_bump(-0.5 / I2, 3.0, 1.0, 2);
    auto p = CurvatureProfile::sum({a, b});
    EXPECT_NEAR(p.alpha(), -0.3, 1e-14);
    EXPECT_NEAR(p.l1_norm(), 0.7, 1e-14);
    auto st = profile_stats(p);
    EXPECT_NEAR(st.s0, 4.0, 1e-14);
    EXPECT_NEAR(st.support_lo, -4.0, 1e-14);
}

TEST(Curvature, PeriodicCosine) {
    auto p = CurvatureProfile::periodic_cosine(0.3, 4.0);
    EXPECT_NEAR(p(0.0), 0.3, 1e-15);
    EXPECT_NEAR(p(1.0), 0.0, 1e-15);
    EXPECT_FALSE(p.decays_at_infinity());
    EXPECT_FALSE(p.integrable());
    EXPECT_TRUE(p.is_periodic());
    EXPECT_THROW(profile_stats(p), NonIntegrable);
    EXPECT_THROW(p.alpha(), NonIntegrable);
}

TEST(Curvature, ScaledFlipsSignedSups) {
    auto base = CurvatureProfile::compact_bump(1.0, 0.0, 1.0, 2);
    auto neg = CurvatureProfile::scaled(-0.5, base);
    EXPECT_EQ(neg.sup_kplus(), 0.0);
    EXPECT_NEAR(neg.sup_kminus(), 0.5, 1e-15);
    auto zero = CurvatureProfile::scaled(0.0, base);
    EXPECT_EQ(zero.sup_kplus(), 0.0);
    EXPECT_NEAR(zero.alpha(), 0.0, 1e-15);
}

TEST(Curvature, PiecewiseLinearExactIntegrals) {
    auto p = CurvatureProfile::piecewise_linear({{-1.0, -1.0}, {0.0, 1.0}, {1.0, 1.0}});
    // trapezoid: [-1,0]: 0, [0,1]: 1
    EXPECT_NEAR(p.alpha(), 1.0, 1e-14);
    // |k|: [-1,0] splits at -0.5: 0.25+0.25, [0,1]: 1
    EXPECT_NEAR(p.l1_norm(), 1.5, 1e-14);
    EXPECT_NEAR(p(-0.5), 0.0, 1e-15);
    EXPECT_EQ(p(2.0), 0.0);
}

TEST(ReconstructCurve, StraightLine) {
    auto tr = reconstruct_curve(CurvatureProfile::zero(), 5.0, 20);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        EXPECT_NEAR(tr.gamma[i][0], tr.s[i], 1e-13);
        EXPECT_NEAR(tr.gamma[i][1], 0.0, 1e-13);
        EXPECT_EQ(tr.normal(i)[0], 0.0);
        EXPECT_EQ(tr.normal(i)[1], 1.0);
    }
}

TEST(ReconstructCurve, ConstantCurvatureIsCircle) {
    // constant k = c: exact circle through the origin, center (0, 1/c)
    const double c = 0.8;
    auto p = CurvatureProfile::piecewise_linear({{-10.0, c}, {10.0, c}});
    auto tr = reconstruct_curve(p, 3.0, 400);
    const double step4 = std::pow(tr.step, 4);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double ex = std::sin(c * tr.s[i]) / c;
        const double ey = (1.0 - std::cos(c * tr.s[i])) / c;
        EXPECT_NEAR(tr.gamma[i][0], ex, 50.0 * step4);
        EXPECT_NEAR(tr.gamma[i][1], ey, 50.0 * step4);
    }
}

TEST(ReconstructCurve, TotalTurnMatchesQuadratureOracle) {
    auto p = CurvatureProfile::compact_bump(-0.7, 0.4, 1.3, 3);
    auto tr = reconstruct_curve(p, 4.0, 800);
    EXPECT_NEAR(tr.theta.back() - tr.theta.front(), alpha_quadrature(p, -4.0, 4.0), 5e-9);
}

TEST(ReconstructCurve, DiscreteUnitSpeed) {
    auto p = CurvatureProfile::compact_bump(-1.0, 0.0, 1.0, 2);
    auto tr = reconstruct_curve(p, 3.0, 600);
    for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
        const double dx = tr.gamma[i + 1][0] - tr.gamma[i][0];
        const double dy = tr.gamma[i + 1][1] - tr.gamma[i][1];
        EXPECT_NEAR(std::hypot(dx, dy), tr.step, tr.step * tr.step * tr.step);
    }
}

TEST(ReconstructCurve, MirrorProfileGivesMirrorTrace) {
    auto p = CurvatureProfile::compact_bump(-0.9, 0.7, 0.5, 2);
    auto pm = CurvatureProfile::compact_bump(-0.9, -0.7, 0.5, 2);  // k(-s)
    auto tr = reconstruct_curve(p, 3.0, 400);
    auto trm = reconstruct_curve(pm, 3.0, 400);
    const std::size_t n = tr.size();
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(trm.gamma[i][0], -tr.gamma[n - 1 - i][0], 1e-10);
        EXPECT_NEAR(trm.gamma[i][1], tr.gamma[n - 1 - i][1], 1e-10);
    }
}

TEST(ReconstructCurve, FourthOrderConvergenceOfTurn) {
    // halving the grid step shrinks successive changes of theta(S) by ~16;
    // smooth high-order bump keeps support-edge effects below the Simpson term
    auto p = CurvatureProfile::compact_bump(1.0, 0.3, 1.7, 6);
    double theta[4];
    const int nlist[4] = {40, 80, 160, 320};
    for (int t = 0; t < 4; ++t) {
        auto tr = reconstruct_curve(p, 2.0, nlist[t]);
        theta[t] = tr.theta.back() - tr.theta.front();
    }
    const double d1 = std::abs(theta[1] - theta[0]);
    const double d2 = std::abs(theta[2] - theta[1]);
    const double d3 = std::abs(theta[3] - theta[2]);
    EXPECT_GT(d1 / d2, 8.0);
    EXPECT_GT(d2 / d3, 8.0);
}

TEST(StripMap, StraightAndOnCurve) {
    auto tr = reconstruct_curve(CurvatureProfile::zero(), 5.0, 100);
    auto pt = strip_map(tr, 2.0, 0.3);
    EXPECT_NEAR(pt[0], 2.0, 1e-12);
    EXPECT_NEAR(pt[1], 0.3, 1e-12);
    auto base = strip_map(tr, -1.7, 0.0);
    EXPECT_NEAR(base[1], 0.0, 1e-12);
    EXPECT_THROW(strip_map(tr, 5.1, 0.0), OutOfRange);
}

TEST(StripMap, ConstantCurvatureAnnulus) {
    const double c = 0.5;
    auto p = CurvatureProfile::piecewise_linear({{-10.0, c}, {10.0, c}});
    auto tr = reconstruct_curve(p, 3.0, 1200);
    // center of the circle is (0, 1/c); fiber points lie on radius 1/c - u
    const double u = 0.2;
    for (double s : {-2.5, -0.9, 0.0, 1.3, 2.9}) {
        auto pt = strip_map(tr, s, u);
        const double r = std::hypot(pt[0], pt[1] - 1.0 / c);
        EXPECT_NEAR(r, 1.0 / c - u, 1e-6);
    }
}

TEST(CheckHypothesis, StraightOk) {
    auto rep = check_hypothesis(CurvatureProfile::zero(), 0.7, 5.0, 400);
    EXPECT_TRUE(rep.thinness_ok);
    EXPECT_FALSE(rep.umlauf_violation);
    EXPECT_FALSE(rep.self_intersection_found);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.C_minus, 1.0);
    EXPECT_EQ(rep.C_plus, 1.0);
}

TEST(CheckHypothesis, ThinnessProduct) {
    auto p = CurvatureProfile::compact_bump(1.2, 0.0, 1.0, 2);
    auto rep = check_hypothesis(p, 1.0, 4.0, 300);
    EXPECT_NEAR(rep.thinness, 1.2, 1e-14);
    EXPECT_FALSE(rep.thinness_ok);
    EXPECT_NEAR(rep.C_minus, -0.2, 1e-14);
    EXPECT_NEAR(rep.C_plus, 1.0, 1e-14);
}

TEST(CheckHypothesis, UmlaufsatzLoopOverlaps) {
    // constant k = 1 over length 7 > 2 pi: full loop, tube must overlap
    auto p = CurvatureProfile::piecewise_linear({{-3.5, 1.0}, {3.5, 1.0}});
    auto rep = check_hypothesis(p, 0.3, 6.0, 800);
    EXPECT_TRUE(rep.umlauf_violation);
    EXPECT_TRUE(rep.self_intersection_found);
    EXPECT_TRUE(rep.has_witness);
    EXPECT_GT(std::abs(rep.witness_s1 - rep.witness_s2), 2.0 * 0.3);
}

TEST(CheckHypothesis, EllipticityEnvelopeOnLattice) {
    auto p = CurvatureProfile::compact_bump(-0.9, 0.2, 0.8, 2);
    const double d = 0.4;
    auto rep = check_hypothesis(p, d, 3.0, 300);
    ASSERT_TRUE(rep.thinness_ok);
    for (int i = 0; i <= 60; ++i)
        for (int j = 0; j <= 8; ++j) {
            const double s = -3.0 + i * 0.1;
            const double u = d * j / 8;
            const double v = 1.0 - u * p(s);
            EXPECT_GE(v, rep.C_minus - 1e-14);
            EXPECT_LE(v, rep.C_plus + 1e-14);
        }
}

TEST(CheckHypothesis, DeterministicWitness) {
    auto p = CurvatureProfile::piecewise_linear({{-3.5, 1.0}, {3.5, 1.0}});
    auto a = check_hypothesis(p, 0.3, 6.0, 640);
    auto b = check_hypothesis(p, 0.3, 6.0, 640);
    EXPECT_EQ(a.witness_s1, b.witness_s1);
    EXPECT_EQ(a.witness_u1, b.witness_u1);
}
