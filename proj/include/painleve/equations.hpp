#pragma once

// Right-hand sides, cleared-denominator residuals and the conserved constraint
// functional for the fourth Painleve equation and its relatives XVII (m = 2),
// XXIX and XXXII from Ince's list of fifty canonical forms.
//
// PIV is written in Ince's XXXI form
//
//     w'' = w'^2 / 2w + 3/2 w^3 + 4 z w^2 + 2 (z^2 - alpha) w - beta^2 / 2w
//
// so `beta` enters squared. Clearing the denominator and differentiating once
// gives the third-order polynomial equation
//
//     w''' = (6 w^2 + 12 z w + 4 (z^2 - alpha)) w' + 4 (w + z) w
//
// which is regular at zeros of w and is what the integrator advances.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include "painleve/errors.hpp"

namespace painleve {

/// Scalars the library is instantiated on: real mode and complex mode.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, std::complex<double>>;

template <class T>
inline constexpr bool is_complex_v = std::same_as<T, std::complex<double>>;

template <Scalar T>
inline bool is_finite(const T& x) {
    if constexpr (is_complex_v<T>) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    } else {
        return std::isfinite(x);
    }
}

enum class EquationKind { PIV, PIV0, XVII, XXIX, XXXII, SQRT_PIV0 };

enum class ScalarField { REAL, COMPLEX };

inline std::string_view to_string(EquationKind kind) {
    switch (kind) {
    case EquationKind::PIV: return "piv";
    case EquationKind::PIV0: return "piv0";
    case EquationKind::XVII: return "xvii";
    case EquationKind::XXIX: return "xxix";
    case EquationKind::XXXII: return "xxxii";
    case EquationKind::SQRT_PIV0: return "sqrt-piv0";
    }
    return "?";
}

inline std::optional<EquationKind> parse_kind(std::string_view name) {
    for (auto k : {EquationKind::PIV, EquationKind::PIV0, EquationKind::XVII, EquationKind::XXIX,
                   EquationKind::XXXII, EquationKind::SQRT_PIV0}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

/// True for the two members of the PIV family (the only kinds with parameters).
inline constexpr bool is_piv_family(EquationKind kind) {
    return kind == EquationKind::PIV || kind == EquationKind::PIV0;
}

/// Kinds advanced as a third-order system; SQRT_PIV0 stays second order.
inline constexpr bool is_third_order(EquationKind kind) { return kind != EquationKind::SQRT_PIV0; }

/// The parameter pair of PIV, with beta entering as beta^2 (Ince's convention).
class Params {
public:
    Params() = default;
    Params(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        if (!std::isfinite(alpha) || !std::isfinite(beta)) {
            throw InvalidParams("alpha and beta must be finite");
        }
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    bool operator==(const Params&) const = default;

private:
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

/// PIV0 is PIV with alpha = beta = 0; any other pair is rejected for it.
inline void validate(EquationKind kind, const Params& p) {
    if (kind == EquationKind::PIV0 && (p.alpha() != 0.0 || p.beta() != 0.0)) {
        throw InvalidParams("piv0 requires alpha = beta = 0");
    }
}

template <Scalar T>
struct Jet2 {
    T z{};
    T w{};
    T w1{};
};

/// (z, w, w', w''): the full state of the third-order system. w''' is never
/// stored; it is recomputed from rhs3.
template <Scalar T>
struct Jet3 {
    T z{};
    T w{};
    T w1{};
    T w2{};

    Jet2<T> truncate() const { return {z, w, w1}; }
    bool finite() const { return is_finite(z) && is_finite(w) && is_finite(w1) && is_finite(w2); }
    bool operator==(const Jet3&) const = default;
};

/// Second derivative from the second-order equation. Refuses w = 0 for every
/// kind that divides by w; the zero limit belongs to the integrator.
template <Scalar T>
T rhs2(EquationKind kind, const Params& p, const Jet2<T>& j) {
    const T& z = j.z;
    const T& w = j.w;
    const T& w1 = j.w1;
    if (kind == EquationKind::SQRT_PIV0) {
        // 4 f'' = f (3 f^2 + 2 t)(f^2 + 2 t)
        const T f2 = w * w;
        return w * (3.0 * f2 + 2.0 * z) * (f2 + 2.0 * z) / 4.0;
    }
    if (w == T{}) {
        throw SingularInput("rhs2: w = 0 for an equation with a 1/w term");
    }
    switch (kind) {
    case EquationKind::PIV:
    case EquationKind::PIV0: {
        const double beta2 = p.beta() * p.beta();
        return (w1 * w1 - beta2) / (2.0 * w) + 1.5 * w * w * w + 4.0 * z * w * w +
               2.0 * (z * z - p.alpha()) * w;
    }
    case EquationKind::XVII: return w1 * w1 / (2.0 * w);
    case EquationKind::XXIX: return w1 * w1 / (2.0 * w) + 1.5 * w * w * w;
    case EquationKind::XXXII: return (w1 * w1 - 1.0) / (2.0 * w);
    case EquationKind::SQRT_PIV0: break;
    }
    throw UnsupportedKind("rhs2: unknown equation kind");
}

/// Third derivative from the differentiated, denominator-free equation.
/// Polynomial, hence defined at w = 0.
template <Scalar T>
T rhs3(EquationKind kind, const Params& p, const T& z, const T& w, const T& w1) {
    switch (kind) {
    case EquationKind::PIV:
    case EquationKind::PIV0:
        return (6.0 * w * w + 12.0 * z * w + 4.0 * (z * z - p.alpha())) * w1 + 4.0 * (w + z) * w;
    case EquationKind::XVII:
    case EquationKind::XXXII:
        // 2 w w''' = 0
        return T{};
    case EquationKind::XXIX: return 6.0 * w * w * w1;
    case EquationKind::SQRT_PIV0:
        throw UnsupportedKind("rhs3: the square-root equation is second order only");
    }
    throw UnsupportedKind("rhs3: unknown equation kind");
}

/// C = 2 w w'' - w'^2 - 3 w^4 - 8 z w^3 - 4 (z^2 - alpha) w^2 + beta^2.
/// Zero exactly on jets consistent with PIV; constant along the third-order flow.
template <Scalar T>
T constraint_c(const Params& p, const Jet3<T>& j) {
    const T& z = j.z;
    const T& w = j.w;
    const T w_sq = w * w;
    return 2.0 * w * j.w2 - j.w1 * j.w1 - 3.0 * w_sq * w_sq - 8.0 * z * w_sq * w -
           4.0 * (z * z - p.alpha()) * w_sq + p.beta() * p.beta();
}

/// 2w (w'' - RHS) expanded, so it is defined at w = 0. For SQRT_PIV0, which has
/// no denominator, the residual is 4 f'' - f (3 f^2 + 2 t)(f^2 + 2 t).
template <Scalar T>
T residual2(EquationKind kind, const Params& p, const Jet3<T>& j) {
    const T& w = j.w;
    const T lhs = 2.0 * w * j.w2 - j.w1 * j.w1;
    switch (kind) {
    case EquationKind::PIV:
    case EquationKind::PIV0: {
        const T w_sq = w * w;
        return lhs - 3.0 * w_sq * w_sq - 8.0 * j.z * w_sq * w - 4.0 * (j.z * j.z - p.alpha()) * w_sq +
               p.beta() * p.beta();
    }
    case EquationKind::XVII: return lhs;
    case EquationKind::XXIX: return lhs - 3.0 * w * w * w * w;
    case EquationKind::XXXII: return lhs + 1.0;
    case EquationKind::SQRT_PIV0: {
        const T f2 = w * w;
        return 4.0 * j.w2 - w * (3.0 * f2 + 2.0 * j.z) * (f2 + 2.0 * j.z);
    }
    }
    throw UnsupportedKind("residual2: unknown equation kind");
}

/// Deviations of the two derivative identities evaluated on a jet with an
/// independent third derivative `w3`:
///
///   delta1 = d/dz (2 w w'' - w'^2) - 2 w w'''
///   delta2 = d/dz (w'^2 / w) - (w' / w^2)(2 w w'' - w'^2)
///
/// Each left side is expanded by the product or quotient rule, so both deltas
/// are zero up to rounding. `scale*` is the largest term magnitude entering the
/// corresponding delta, for relative comparisons. delta2 is absent when w = 0.
template <Scalar T>
struct JetIdentityDeltas {
    T delta1{};
    double scale1 = 0.0;
    std::optional<T> delta2;
    double scale2 = 0.0;
};

template <Scalar T>
JetIdentityDeltas<T> jet_identities(const Jet3<T>& j, const T& w3) {
    using std::abs;
    JetIdentityDeltas<T> out;
    const T& w = j.w;
    const T& w1 = j.w1;
    const T& w2 = j.w2;

    const T cross = 2.0 * w1 * w2;
    const T lifted = 2.0 * w * w3;
    out.delta1 = (cross + lifted - cross) - lifted;
    out.scale1 = std::max(abs(cross), abs(lifted));

    if (w != T{}) {
        const T quotient_rule_a = cross / w;
        const T quotient_rule_b = w1 * w1 * w1 / (w * w);
        const T rival = (w1 / (w * w)) * (2.0 * w * w2 - w1 * w1);
        out.delta2 = (quotient_rule_a - quotient_rule_b) - rival;
        out.scale2 = std::max({abs(quotient_rule_a), abs(quotient_rule_b), abs(rival)});
    }
    return out;
}

} // namespace painleve
