#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "painleve/equations.hpp"

using namespace painleve;
using cplx = std::complex<double>;

namespace {

Jet2<double> j2(double z, double w, double w1) { return {z, w, w1}; }
Jet3<double> j3(double z, double w, double w1, double w2) { return {z, w, w1, w2}; }

} // namespace

TEST(Params, RejectsNonFinite) {
    EXPECT_THROW(Params(NAN, 0.0), InvalidParams);
    EXPECT_THROW(Params(0.0, INFINITY), InvalidParams);
    EXPECT_NO_THROW(Params(1.0, -2.0));
}

TEST(Params, Piv0RejectsNonzeroParams) {
    EXPECT_THROW(validate(EquationKind::PIV0, Params{0.0, 1.0}), InvalidParams);
    EXPECT_THROW(validate(EquationKind::PIV0, Params{0.5, 0.0}), InvalidParams);
    EXPECT_NO_THROW(validate(EquationKind::PIV0, Params{}));
    EXPECT_NO_THROW(validate(EquationKind::PIV, Params{0.5, 2.0}));
}

TEST(Kind, NamesRoundTrip) {
    for (auto k : {EquationKind::PIV, EquationKind::PIV0, EquationKind::XVII, EquationKind::XXIX,
                   EquationKind::XXXII, EquationKind::SQRT_PIV0}) {
        EXPECT_EQ(parse_kind(to_string(k)), k);
    }
    EXPECT_FALSE(parse_kind("p4").has_value());
    EXPECT_EQ(parse_kind("sqrt-piv0"), EquationKind::SQRT_PIV0);
}

TEST(Rhs2, HandValues) {
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::PIV, Params{}, j2(0, 1, 0)), 1.5);
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::PIV, Params{1, 1}, j2(1, 1, 2)), 7.0);
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::XXXII, Params{}, j2(3.7, 1, 1)), 0.0);
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::SQRT_PIV0, Params{}, j2(0, 2, -5)), 24.0);
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::XVII, Params{}, j2(0, 1, 2)), 2.0);
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::XXIX, Params{}, j2(0, 1, 1)), 2.0);
}

TEST(Rhs2, SingularAtZero) {
    for (auto k : {EquationKind::PIV, EquationKind::PIV0, EquationKind::XVII, EquationKind::XXIX, EquationKind::XXXII}) {
        EXPECT_THROW(rhs2(k, Params{}, j2(0, 0, 1)), SingularInput);
    }
    EXPECT_DOUBLE_EQ(rhs2(EquationKind::SQRT_PIV0, Params{}, j2(1, 0, 1)), 0.0);
}

TEST(Rhs3, HandValues) {
    EXPECT_DOUBLE_EQ(rhs3(EquationKind::PIV, Params{}, 1.0, 0.0, 2.0), 8.0);
    EXPECT_DOUBLE_EQ(rhs3(EquationKind::PIV, Params{}, 0.0, 0.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(rhs3(EquationKind::XXIX, Params{}, 0.0, 1.0, 2.0), 12.0);
    EXPECT_DOUBLE_EQ(rhs3(EquationKind::XXXII, Params{}, 0.3, 5.0, -2.0), 0.0);
    EXPECT_DOUBLE_EQ(rhs3(EquationKind::XVII, Params{}, 0.3, 5.0, -2.0), 0.0);
    EXPECT_THROW(rhs3(EquationKind::SQRT_PIV0, Params{}, 0.0, 1.0, 1.0), UnsupportedKind);
}

TEST(Rhs3, AtZeroIsFourZSquaredMinusAlphaTimesSlope) {
    const double alpha = 0.7;
    for (double a : {-1.0, 0.0, 2.5}) {
        EXPECT_DOUBLE_EQ(rhs3(EquationKind::PIV, Params{alpha, 1}, a, 0.0, 1.0), 4.0 * (a * a - alpha));
    }
}

TEST(Constraint, HandValues) {
    EXPECT_DOUBLE_EQ(constraint_c(Params{}, j3(0, 1, 0, 1.5)), 0.0);
    EXPECT_DOUBLE_EQ(constraint_c(Params{0.3, 2.0}, j3(1.7, 0, 2.0, 9.0)), 0.0);
    EXPECT_DOUBLE_EQ(constraint_c(Params{0.3, 2.0}, j3(1.7, 0, -2.0, -4.0)), 0.0);
    EXPECT_DOUBLE_EQ(constraint_c(Params{}, j3(0, 1, 1, 0)), -4.0);
}

TEST(Residual2, HandValues) {
    for (double z : {-1.5, 0.0, 0.25, 3.0}) {
        EXPECT_NEAR(residual2(EquationKind::XXXII, Params{}, j3(z, z * z + z, 2 * z + 1, 2)), 0.0, 1e-12);
        EXPECT_NEAR(residual2(EquationKind::XVII, Params{}, j3(z, (z + 1) * (z + 1), 2 * (z + 1), 2)), 0.0, 1e-12);
    }
    EXPECT_DOUBLE_EQ(residual2(EquationKind::XXIX, Params{}, j3(0, 1, 0, 0)), -3.0);
}

TEST(Properties, ConsistencyAndAgreement) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 500; ++i) {
        const Params p{u(rng), u(rng)};
        Jet3<double> j{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(j.w) < 1e-3) {
            continue;
        }
        const double scale = std::max({1.0, std::pow(j.w, 4), std::abs(8 * j.z * std::pow(j.w, 3)),
                                       std::abs(2 * j.w * j.w2), j.w1 * j.w1, p.beta() * p.beta(),
                                       std::abs(4 * (j.z * j.z - p.alpha()) * j.w * j.w)});
        EXPECT_NEAR(residual2(EquationKind::PIV, p, j), constraint_c(p, j), 1e-14 * scale);
        j.w2 = rhs2(EquationKind::PIV, p, j.truncate());
        EXPECT_NEAR(constraint_c(p, j), 0.0, 1e-13 * std::max(scale, std::abs(2 * j.w * j.w2)));
    }
}

// d/dz of C along w''' = rhs3 is zero: check with a central difference of C
// along a short Taylor path.
TEST(Properties, ConstraintDerivativeVanishes) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const Params p{u(rng), u(rng)};
        const Jet3<double> j{u(rng), u(rng), u(rng), u(rng)};
        const double w3 = rhs3(EquationKind::PIV, p, j.z, j.w, j.w1);
        // dC/dz = 2 w1 w2 + 2 w w3 - 2 w1 w2 - (12 w^3 + 24 z w^2 + 8 (z^2 - a) w) w1 - 8 w^3 - 8 z w^2.
        const double a = p.alpha();
        const double dC = 2 * j.w * w3 - (12 * std::pow(j.w, 3) + 24 * j.z * j.w * j.w + 8 * (j.z * j.z - a) * j.w) * j.w1 -
                          8 * std::pow(j.w, 3) - 8 * j.z * j.w * j.w;
        EXPECT_NEAR(dC, 0.0, 1e-11 * std::max(1.0, std::abs(2 * j.w * w3)));
    }
}

TEST(JetIdentities, Examples) {
    auto d = jet_identities(j3(0, 2, 3, 5), 7.0);
    EXPECT_DOUBLE_EQ(d.delta1, 0.0);
    ASSERT_TRUE(d.delta2.has_value());
    EXPECT_NEAR(*d.delta2, 0.0, 1e-15);
    d = jet_identities(j3(0, 1, 0, 0), 0.0);
    EXPECT_DOUBLE_EQ(d.delta1, 0.0);
    EXPECT_DOUBLE_EQ(*d.delta2, 0.0);
}

TEST(JetIdentities, Delta2AbsentAtZero) {
    const auto d = jet_identities(j3(0, 0, 3, 5), 7.0);
    EXPECT_DOUBLE_EQ(d.delta1, 0.0);
    EXPECT_FALSE(d.delta2.has_value());
}

TEST(JetIdentities, ComplexJets) {
    const Jet3<cplx> j{{0.1, 0.2}, {1.0, -2.0}, {0.5, 3.0}, {-1.0, 1.0}};
    const auto d = jet_identities(j, cplx{2.0, -1.0});
    EXPECT_LT(std::abs(d.delta1), 1e-14);
    EXPECT_LT(std::abs(*d.delta2), 1e-14);
}

TEST(Complex, RhsMatchesRealOnRealAxis) {
    const Params p{0.4, 1.3};
    const Jet2<double> r{0.7, 1.1, -0.4};
    const Jet2<cplx> c{0.7, 1.1, -0.4};
    EXPECT_NEAR(std::abs(rhs2(EquationKind::PIV, p, c) - rhs2(EquationKind::PIV, p, r)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(rhs3(EquationKind::PIV, p, c.z, c.w, c.w1) - rhs3(EquationKind::PIV, p, r.z, r.w, r.w1)), 0.0, 1e-14);
}
