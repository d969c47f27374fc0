#pragma once

// Exact ground truth for the integrator.
//
//  * XXXII and XVII reduce to w''' = 0 after clearing 2w and differentiating,
//    so every solution is a quadratic a z^2 + b z + c; the second-order
//    equation then filters b^2 - 4ac = 1 (XXXII) or 0 (XVII).
//  * XXIX gives w'' = 2 w^3 + k and w'^2 = w^4 + K w + L with L = 0 on
//    solutions; w = 1/(C - z) is an exact one-parameter pole family.
//  * XXXII under w = u^2 has the first integral u'^2 = K + 1/(4 u^2).
//  * Near an isolated zero a of a real PIV0 solution, f = -sqrt(w) before a and
//    +sqrt(w) after a solves 4 f'' = f (3 f^2 + 2t)(f^2 + 2t).

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "painleve/equations.hpp"
#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"
#include "painleve/zeros.hpp"

namespace painleve {

template <Scalar T>
struct QuadraticSolution {
    T a{};
    T b{};
    T c{};
    EquationKind kind = EquationKind::XXXII;

    T discriminant() const { return b * b - 4.0 * a * c; }
};

/// b^2 - 4ac required by the second-order equation.
inline double required_discriminant(EquationKind kind) {
    switch (kind) {
    case EquationKind::XXXII: return 1.0;
    case EquationKind::XVII: return 0.0;
    default: throw WrongKind("quadratic solutions exist for xvii and xxxii only");
    }
}

template <Scalar T>
QuadraticSolution<T> fit_quadratic(EquationKind kind, const Jet2<T>& j) {
    using std::abs;
    const double target = required_discriminant(kind);
    if (j.w == T{}) {
        throw SingularInput("fit_quadratic: w = 0 leaves w'' undetermined");
    }
    QuadraticSolution<T> q;
    q.kind = kind;
    q.a = rhs2(kind, Params{}, j) / 2.0;
    q.b = j.w1 - 2.0 * q.a * j.z;
    q.c = j.w - q.a * j.z * j.z - q.b * j.z;
    if (abs(q.discriminant() - target) > 1e-10) {
        throw DiscriminantViolation("fitted quadratic violates its discriminant constraint");
    }
    return q;
}

template <Scalar T>
Jet3<T> eval_quadratic(const QuadraticSolution<T>& q, const T& z) {
    return {z, (q.a * z + q.b) * z + q.c, 2.0 * q.a * z + q.b, 2.0 * q.a};
}

template <Scalar T>
struct XXIXIntegrals {
    T k{}; ///< w'' - 2 w^3
    T K{}; ///< coefficient of w in w'^2 = w^4 + K w + L
    T L{};
};

/// Constants of XXIX's third-order reduction on a single jet. K = 2k follows
/// from multiplying w'' = 2 w^3 + k by 2 w' and integrating.
template <Scalar T>
XXIXIntegrals<T> xxix_integrals(const Jet3<T>& j) {
    XXIXIntegrals<T> out;
    const T w_sq = j.w * j.w;
    out.k = j.w2 - 2.0 * w_sq * j.w;
    out.K = 2.0 * out.k;
    out.L = j.w1 * j.w1 - w_sq * w_sq - out.K * j.w;
    return out;
}

/// w = 1 / (pole - z), an exact solution of XXIX with k = K = L = 0.
template <Scalar T>
Jet3<T> xxix_pole_family(const T& pole, const T& z) {
    if (z == pole) {
        throw SingularInput("xxix_pole_family: z is the pole");
    }
    const T u = T{1.0} / (pole - z);
    return {z, u, u * u, 2.0 * u * u * u};
}

/// K in u'^2 = K + 1/(4u^2) for w = u^2, u = sign * sqrt(w).
inline double xxxii_u_integral(const Jet2<double>& j, int sign = 1) {
    if (!(j.w > 0.0)) {
        throw SingularInput("xxxii_u_integral: needs w > 0");
    }
    const double u = (sign < 0 ? -1.0 : 1.0) * std::sqrt(j.w);
    const double u1 = j.w1 / (2.0 * u);
    return u1 * u1 - 1.0 / (4.0 * u * u);
}

/// (t, f, f') -> jet of w = f^2, with f'' taken from the square-root equation.
template <Scalar T>
Jet3<T> square_push(const Jet2<T>& f) {
    const T f2 = rhs2(EquationKind::SQRT_PIV0, Params{}, f);
    return {f.z, f.w * f.w, 2.0 * f.w * f.w1, 2.0 * f.w1 * f.w1 + 2.0 * f.w * f2};
}

struct RootSample {
    double t = 0.0;
    double f = 0.0;
    double f1 = 0.0;
};

struct SqrtLift {
    std::vector<RootSample> samples; ///< ordered by increasing t
    std::optional<double> zero;
    /// |f'(a + d) - f'(a - d) - integral of f'' over [a - d, a + d]|; 0 without a zero.
    double slope_jump = 0.0;
};

namespace detail {

inline double lifted_slope(double w, double w1, double sign) {
    const double f = sign * std::sqrt(w);
    return w1 / (2.0 * f);
}

} // namespace detail

/// Square root of a real PIV0 trajectory on [lo, hi] (values of the real
/// variable). With a zero event, f = -sqrt(w) for t <= a and +sqrt(w) for
/// t >= a, and f'(a) = +sqrt(w''(a) / 2). Without one, f = +sqrt(w).
inline SqrtLift sqrt_lift(const Trajectory<double>& traj, const std::optional<ZeroEvent<double>>& event,
                          double lo, double hi, double probe = 1e-2) {
    if (traj.kind != EquationKind::PIV0) {
        throw WrongKind("sqrt_lift needs a piv0 trajectory");
    }
    if (!(lo < hi)) {
        throw InvalidInitialData("sqrt_lift: empty interval");
    }
    const double abs_tol = traj.tol.abs;
    const double z_first = traj.nodes.front().jet.z;
    const double z_last = traj.nodes.back().jet.z;
    const double span_lo = std::min(z_first, z_last);
    const double span_hi = std::max(z_first, z_last);
    if (lo < span_lo || hi > span_hi) {
        throw OutOfSpan("sqrt_lift: interval outside the trajectory");
    }
    if (event && !(event->a >= lo && event->a <= hi)) {
        throw InvalidInitialData("sqrt_lift: zero event outside the interval");
    }

    std::size_t zeros_inside = 0;
    for (const auto& ev : locate_zeros(traj)) {
        if (ev.a >= lo && ev.a <= hi) {
            ++zeros_inside;
        }
    }
    if (zeros_inside > (event ? 1u : 0u)) {
        throw MultipleZeros("sqrt_lift: the interval must contain at most the given zero");
    }

    const double a = event ? event->a : lo - 1.0;
    SqrtLift out;
    out.zero = event ? std::optional<double>(event->a) : std::nullopt;

    auto lift_jet = [&](const Jet3<double>& jet) {
        double w = jet.w;
        if (w < -abs_tol) {
            throw NegativeW("sqrt_lift: w < 0 inside the interval");
        }
        w = std::max(w, 0.0);
        const double sign = jet.z < a ? -1.0 : 1.0;
        RootSample s{jet.z, sign * std::sqrt(w), 0.0};
        if (s.f != 0.0) {
            s.f1 = detail::lifted_slope(w, jet.w1, sign);
        } else {
            s.f1 = std::sqrt(std::max(jet.w2, 0.0) / 2.0);
        }
        return s;
    };

    for (const auto& node : traj.nodes) {
        if (node.jet.z >= lo && node.jet.z <= hi && !(event && node.jet.z == a)) {
            out.samples.push_back(lift_jet(node.jet));
        }
    }
    if (event) {
        const Jet3<double> at_zero = dense_eval(traj, event->a);
        out.samples.push_back({event->a, 0.0, std::sqrt(std::max(at_zero.w2, 0.0) / 2.0)});
    }
    std::sort(out.samples.begin(), out.samples.end(),
              [](const RootSample& x, const RootSample& y) { return x.t < y.t; });

    if (event) {
        const double d = std::min({probe, (a - lo) / 2.0, (hi - a) / 2.0});
        if (d > 0.0) {
            const RootSample left = lift_jet(dense_eval(traj, a - d));
            const RootSample right = lift_jet(dense_eval(traj, a + d));
            // Simpson's rule for the smooth change of f' across [a - d, a + d].
            auto f2 = [](const RootSample& s) {
                return rhs2(EquationKind::SQRT_PIV0, Params{}, Jet2<double>{s.t, s.f, s.f1});
            };
            const RootSample mid{a, 0.0, 0.0};
            const double smooth = d / 3.0 * (f2(left) + 4.0 * f2(mid) + f2(right));
            out.slope_jump = std::abs(right.f1 - left.f1 - smooth);
        }
    }
    return out;
}

} // namespace painleve
