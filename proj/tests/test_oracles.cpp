#include <cmath>

#include <gtest/gtest.h>

#include "painleve/oracles.hpp"

using namespace painleve;

TEST(FitQuadratic, Examples) {
    auto q = fit_quadratic(EquationKind::XXXII, Jet2<double>{0, 1, 1});
    EXPECT_DOUBLE_EQ(q.a, 0.0);
    EXPECT_DOUBLE_EQ(q.b, 1.0);
    EXPECT_DOUBLE_EQ(q.c, 1.0);
    EXPECT_DOUBLE_EQ(q.discriminant(), 1.0);
    q = fit_quadratic(EquationKind::XXXII, Jet2<double>{0, 2, 3});
    EXPECT_DOUBLE_EQ(q.a, 1.0);
    EXPECT_DOUBLE_EQ(q.b, 3.0);
    EXPECT_DOUBLE_EQ(q.c, 2.0);
    q = fit_quadratic(EquationKind::XVII, Jet2<double>{0, 1, 2});
    EXPECT_DOUBLE_EQ(q.a, 1.0);
    EXPECT_DOUBLE_EQ(q.b, 2.0);
    EXPECT_DOUBLE_EQ(q.c, 1.0);
    EXPECT_DOUBLE_EQ(q.discriminant(), 0.0);
}

TEST(FitQuadratic, OffOriginJet) {
    // w = z^2 + 3z + 2 at z0 = 1.5.
    const double z = 1.5;
    const auto q = fit_quadratic(EquationKind::XXXII, Jet2<double>{z, z * z + 3 * z + 2, 2 * z + 3});
    EXPECT_NEAR(q.a, 1.0, 1e-14);
    EXPECT_NEAR(q.b, 3.0, 1e-13);
    EXPECT_NEAR(q.c, 2.0, 1e-13);
}

TEST(FitQuadratic, Errors) {
    EXPECT_THROW(fit_quadratic(EquationKind::XXXII, Jet2<double>{0, 0, 1}), SingularInput);
    EXPECT_THROW(fit_quadratic(EquationKind::PIV, Jet2<double>{0, 1, 1}), WrongKind);
}

TEST(EvalQuadratic, Examples) {
    using Q = QuadraticSolution<double>;
    EXPECT_EQ(eval_quadratic(Q{1, 3, 2}, 0.0), (Jet3<double>{0, 2, 3, 2}));
    EXPECT_EQ(eval_quadratic(Q{0, 1, 1}, 5.0), (Jet3<double>{5, 6, 1, 0}));
    EXPECT_EQ(eval_quadratic(Q{1, 0, -0.25}, 0.5), (Jet3<double>{0.5, 0, 1, 2}));
}

TEST(XxixIntegrals, Examples) {
    auto i = xxix_integrals(Jet3<double>{0, 1, 1, 2});
    EXPECT_DOUBLE_EQ(i.k, 0.0);
    EXPECT_DOUBLE_EQ(i.K, 0.0);
    EXPECT_DOUBLE_EQ(i.L, 0.0);
    i = xxix_integrals(Jet3<double>{0, 1, 2, 2});
    EXPECT_DOUBLE_EQ(i.L, 3.0);
    i = xxix_integrals(Jet3<double>{0, 1, 0, 3});
    EXPECT_DOUBLE_EQ(i.k, 1.0);
    EXPECT_DOUBLE_EQ(i.K, 2.0);
    EXPECT_DOUBLE_EQ(i.L, -3.0);
}

TEST(XxixPoleFamily, Examples) {
    EXPECT_EQ(xxix_pole_family(1.0, 0.0), (Jet3<double>{0, 1, 1, 2}));
    EXPECT_EQ(xxix_pole_family(1.0, 0.5), (Jet3<double>{0.5, 2, 4, 16}));
    EXPECT_THROW(xxix_pole_family(1.0, 1.0), SingularInput);
    for (double z : {-3.0, 0.2, 0.9, 1.7}) {
        const auto j = xxix_pole_family(1.0, z);
        EXPECT_NEAR(residual2(EquationKind::XXIX, Params{}, j), 0.0, 1e-12 * std::pow(j.w, 4));
    }
}

TEST(XxxiiUIntegral, Examples) {
    EXPECT_DOUBLE_EQ(xxxii_u_integral(Jet2<double>{1, 2, 3}, 1), 1.0);
    EXPECT_DOUBLE_EQ(xxxii_u_integral(Jet2<double>{0, 1, 1}, 1), 0.0);
    EXPECT_DOUBLE_EQ(xxxii_u_integral(Jet2<double>{1, 2, 3}, -1), xxxii_u_integral(Jet2<double>{1, 2, 3}, 1));
    EXPECT_THROW(xxxii_u_integral(Jet2<double>{0, 0, 1}), SingularInput);
    EXPECT_THROW(xxxii_u_integral(Jet2<double>{0, -1, 1}), SingularInput);
}

TEST(SquarePush, Examples) {
    EXPECT_EQ(square_push(Jet2<double>{0, 2, 3}), (Jet3<double>{0, 4, 12, 114}));
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::PIV0, Params{}, Jet2<double>{0, 4, 12}), 114.0);
    EXPECT_EQ(square_push(Jet2<double>{0.7, 0, -1.5}), (Jet3<double>{0.7, 0, 0, 4.5}));
    EXPECT_EQ(square_push(Jet2<double>{0.7, 0, 0}), (Jet3<double>{0.7, 0, 0, 0}));
}

TEST(SqrtLift, ZeroSegment) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0, 0, 0}}, 1.0);
    const auto lift = sqrt_lift(traj, std::nullopt, 0.0, 1.0);
    for (const auto& s : lift.samples) {
        EXPECT_EQ(s.f, 0.0);
    }
}

TEST(SqrtLift, SlopeAtSeededZero) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0, 0, 2}}, 0.5);
    const auto ev = locate_zeros(traj);
    ASSERT_EQ(ev.size(), 1u);
    const auto lift = sqrt_lift(traj, ev[0], 0.0, 0.5);
    ASSERT_EQ(lift.samples.front().t, 0.0);
    EXPECT_DOUBLE_EQ(lift.samples.front().f1 * lift.samples.front().f1, 1.0);
}

TEST(SqrtLift, RoundTripThroughSquarePush) {
    const auto traj = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, NonzeroSeed<double>{0.5, 0.3}}, 1.0);
    const auto lift = sqrt_lift(traj, std::nullopt, 0.0, 1.0);
    for (const auto& s : lift.samples) {
        const auto w = dense_eval(traj, s.t);
        EXPECT_NEAR(square_push(Jet2<double>{s.t, s.f, s.f1}).w, w.w, 1e-9);
        EXPECT_NEAR(square_push(Jet2<double>{s.t, s.f, s.f1}).w1, w.w1, 1e-9);
    }
}

TEST(SqrtLift, Errors) {
    const auto q = integrate(EquationKind::XXXII, Params{}, InitialData<double>{0.0, NonzeroSeed<double>{2.0, 3.0}}, 1.0);
    EXPECT_THROW(sqrt_lift(q, std::nullopt, 0.0, 1.0), WrongKind);
    // Raw data that crosses zero with nonzero slope, so w < 0 afterwards.
    const auto neg = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, RawSeed<double>{0.1, -1.0, 0.0}}, 0.5);
    const auto crossing = locate_zeros(neg);
    ASSERT_EQ(crossing.size(), 1u);
    EXPECT_THROW(sqrt_lift(neg, std::nullopt, 0.0, 0.5), MultipleZeros);
    EXPECT_THROW(sqrt_lift(neg, crossing[0], 0.0, 0.5), NegativeW);
    const auto ok = integrate(EquationKind::PIV0, Params{}, InitialData<double>{0.0, NonzeroSeed<double>{0.5, 0.3}}, 1.0);
    EXPECT_THROW(sqrt_lift(ok, std::nullopt, -1.0, 0.5), OutOfSpan);
}
