#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "painleve/zeros.hpp"

using namespace painleve;
using cplx = std::complex<double>;

TEST(LocateZeros, XxxiiQuadraticTwoCrossings) {
    // w = z^2 - 1/4: at z0 = -2, w = 3.75, w' = -4.
    const auto traj = integrate(EquationKind::XXXII, Params{}, InitialData<double>{-2.0, NonzeroSeed<double>{3.75, -4.0}}, 4.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0].a, -0.5, 1e-9);
    EXPECT_NEAR(ev[0].slope, -1.0, 1e-8);
    EXPECT_NEAR(ev[1].a, 0.5, 1e-9);
    EXPECT_NEAR(ev[1].slope, 1.0, 1e-8);
    for (const auto& e : ev) {
        EXPECT_LT(e.abs_w, traj.tol.abs);
        EXPECT_EQ(e.branch, ZeroBranch::UNRESOLVED);
    }
}

TEST(LocateZeros, ReverseRunOrderedAlongPath) {
    const auto traj = integrate(EquationKind::XXXII, Params{}, InitialData<double>{2.0, NonzeroSeed<double>{3.75, 4.0}, -1.0}, 4.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0].a, 0.5, 1e-9);
    EXPECT_NEAR(ev[1].a, -0.5, 1e-9);
    EXPECT_LT(ev[0].t, ev[1].t);
}

TEST(LocateZeros, PivZeroSeedIsPlusBeta) {
    const auto traj = integrate(EquationKind::PIV, Params{0, 1}, InitialData<double>{0.0, ZeroSeed<double>{ZeroSign::PLUS, 0.0}}, 1.0);
    const auto ev = locate_zeros(traj);
    ASSERT_FALSE(ev.empty());
    EXPECT_NEAR(ev[0].a, 0.0, 1e-12);
    EXPECT_NEAR(ev[0].slope, 1.0, 1e-8);
    EXPECT_EQ(ev[0].branch, ZeroBranch::PLUS_BETA);
}

TEST(LocateZeros, MinusBranch) {
    const auto traj = integrate(EquationKind::PIV, Params{0.5, 2}, InitialData<double>{0.3, ZeroSeed<double>{ZeroSign::MINUS, 1.0}, -1.0}, 0.5);
    const auto ev = locate_zeros(traj);
    ASSERT_FALSE(ev.empty());
    EXPECT_EQ(ev[0].branch, ZeroBranch::MINUS_BETA);
    EXPECT_NEAR(ev[0].slope, -2.0, 1e-6 * 2.0);
}

TEST(LocateZeros, IdenticallyZeroIsEmpty) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, ZeroSeed<double>{ZeroSign::PLUS, 0.0}}, 2.0);
    EXPECT_TRUE(locate_zeros(traj).empty());
}

TEST(LocateZeros, Piv0TangentialSeed) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0.0, 0.0, 1.0}}, 1.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].a, 0.0);
    EXPECT_EQ(ev[0].curvature, 1.0);
    EXPECT_TRUE(ev[0].curvature_nonzero);
    EXPECT_EQ(ev[0].branch, ZeroBranch::PLUS_BETA);
}

// w = f^2 with f crossing zero: an interior tangential zero.
TEST(LocateZeros, InteriorTangency) {
    const double f0 = -0.5, f1 = 2.0;
    const double f2 = rhs2(EquationKind::SQRT_PIV0, Params{}, Jet2<double>{0.0, f0, f1});
    const auto ftraj = integrate(EquationKind::SQRT_PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{f0, f1, 0.0}}, 1.0);
    const auto traj = integrate(EquationKind::PIV0, Params{},
                                InitialData<double>{0.0, RawSeed<double>{f0 * f0, 2 * f0 * f1, 2 * f1 * f1 + 2 * f0 * f2}}, 1.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 1u);
    // Zero of the integrated f by bisection on its dense output.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (dense_eval(ftraj, mid).w < 0.0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(ev[0].a, lo, 1e-5);
    EXPECT_LT(std::abs(ev[0].slope), 1e-6);
    EXPECT_GT(ev[0].curvature, 1.0);
    EXPECT_TRUE(ev[0].curvature_nonzero);
}

TEST(LocateZeros, ComplexMinimumOnRealAxis) {
    const auto traj = integrate(EquationKind::XXXII, Params{}, InitialData<cplx>{-2.0, NonzeroSeed<cplx>{3.75, -4.0}}, 4.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(std::abs(ev[0].a - cplx{-0.5}), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(ev[1].a - cplx{0.5}), 0.0, 1e-6);
}

TEST(Bisection, MonotoneRefinement) {
    const auto traj = integrate(EquationKind::XXXII, Params{}, InitialData<double>{0.0, NonzeroSeed<double>{-0.25, 0.0}}, 2.0);
    // w = z^2 - 1/4 on [0, 2]; sign change in the node bracket around 0.5.
    std::size_t i = 1;
    while (traj.nodes[i].jet.w < 0.0) {
        ++i;
    }
    const auto r = detail::bisect_sign_change(traj, traj.nodes[i - 1].t, traj.nodes[i].t, 1e-14, 60);
    ASSERT_GE(r.history.size(), 2u);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
        EXPECT_LE(r.history[k], r.history[k - 1]);
    }
    EXPECT_NEAR(r.t, 0.5, 1e-10);
}

// Isolation is measured in local steps; steps on an exact quadratic are long.
TEST(LocateZeros, IsolationCountsLocalSteps) {
    const auto traj = integrate(EquationKind::XXXII, Params{}, InitialData<double>{-2.0, NonzeroSeed<double>{3.75, -4.0}}, 4.0);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_FALSE(ev[0].isolated);
    ZeroScanOptions opt;
    opt.isolation_steps = 0.1;
    for (const auto& e : locate_zeros(traj, opt)) {
        EXPECT_TRUE(e.isolated);
    }
}

TEST(CurvatureCheck, Reports) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0.0, 0.0, 1.0}}, 1.0);
    const auto rep = check_curvature_theorem(locate_zeros(traj), traj);
    EXPECT_EQ(rep.checked, 1u);
    EXPECT_TRUE(rep.ok());
    EXPECT_FALSE(rep.vacuous());

    const auto zero = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0.0, 0.0, 0.0}}, 1.0);
    const auto vac = check_curvature_theorem(locate_zeros(zero), zero);
    EXPECT_TRUE(vac.vacuous());
    EXPECT_TRUE(vac.ok());
}

TEST(CurvatureCheck, FlagsFlatEvent) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0.0, 0.0, 1.0}}, 1.0);
    auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 1u);
    ev[0].curvature = 0.0;
    const auto rep = check_curvature_theorem(ev, traj);
    EXPECT_FALSE(rep.ok());
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].index, 0u);
}

TEST(CurvatureCheck, WrongKind) {
    const auto traj = integrate(EquationKind::PIV, Params{0, 1}, InitialData<double>{0.0, ZeroSeed<double>{ZeroSign::PLUS, 0.0}}, 1.0);
    EXPECT_THROW(check_curvature_theorem(locate_zeros(traj), traj), WrongKind);
    const auto q = integrate(EquationKind::XXXII, Params{}, InitialData<double>{0.0, NonzeroSeed<double>{2.0, 3.0}}, 1.0);
    EXPECT_THROW(check_curvature_theorem(locate_zeros(q), q), WrongKind);
}

// beta = 0 PIV run (alpha != 0) that touches zero: no flat, slope-free event.
TEST(LocateZeros, BetaZeroPivCrossingsAreTangential) {
    const auto traj = integrate(EquationKind::PIV, Params{1.0, 0.0}, InitialData<double>{0.0, RawSeed<double>{0.0, 0.0, 0.8}, -1.0}, 3.0);
    const auto ev = locate_zeros(traj);
    ASSERT_FALSE(ev.empty());
    for (const auto& e : ev) {
        EXPECT_FALSE(std::abs(e.slope) < 1e-6 && std::abs(e.curvature) < 1e-8);
    }
}
