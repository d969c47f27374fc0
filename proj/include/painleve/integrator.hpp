#pragma once

// Adaptive explicit integration of the third-order PIV' system (and of the
// second-order square-root equation) along a straight path
//
//     z(t) = z0 + t * d,   t in [0, span],   |d| = 1,
//
// with Dormand-Prince 5(4), a PI step-size controller, pole detection and
// quintic Hermite dense output built from (w, w', w'') at the nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "painleve/equations.hpp"
#include "painleve/errors.hpp"

namespace painleve {

enum class ZeroSign { PLUS, MINUS };

/// w0 != 0 and w'(z0) given; w'' is completed from the second-order equation.
template <Scalar T>
struct NonzeroSeed {
    T w0{};
    T w1{};
};

/// w(z0) = 0, w'(z0) = +beta or -beta, w''(z0) free.
template <Scalar T>
struct ZeroSeed {
    ZeroSign branch = ZeroSign::PLUS;
    T w2{};
};

/// Arbitrary third-order data, not necessarily consistent with the
/// second-order equation.
template <Scalar T>
struct RawSeed {
    T w0{};
    T w1{};
    T w2{};
};

template <Scalar T>
using Seed = std::variant<NonzeroSeed<T>, ZeroSeed<T>, RawSeed<T>>;

template <Scalar T>
struct InitialData {
    T z0{};
    Seed<T> seed = RawSeed<T>{};
    /// Unit path direction. Real mode accepts +1 or -1.
    T direction{1.0};
};

struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-10;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double pole_cutoff = 1e8;

    void validate() const {
        if (!(rel >= 1e-14) || !(abs >= 1e-14)) {
            throw InvalidTolerances("rel and abs must be at least 1e-14");
        }
        if (!(h_init > 0.0) || !(h_min > 0.0) || !(h_min < h_init)) {
            throw InvalidTolerances("need 0 < h_min < h_init");
        }
        if (!(pole_cutoff >= 1e3)) {
            throw InvalidTolerances("pole_cutoff must be at least 1e3");
        }
    }
};

enum class Status { COMPLETED, POLE, STEP_UNDERFLOW };

inline std::string_view to_string(Status s) {
    switch (s) {
    case Status::COMPLETED: return "COMPLETED";
    case Status::POLE: return "POLE";
    case Status::STEP_UNDERFLOW: return "STEP_UNDERFLOW";
    }
    return "?";
}

template <Scalar T>
struct Node {
    double t = 0.0;   ///< path parameter
    Jet3<T> jet;
    double h = 0.0;   ///< step that produced this node, 0 for the seed
    double err = 0.0; ///< embedded error estimate of that step
    T C{};
    T res2{};
};

template <Scalar T>
struct Trajectory {
    EquationKind kind = EquationKind::PIV;
    Params params;
    Tolerances tol;
    T z0{};
    T direction{1.0};
    double span = 0.0;
    std::vector<Node<T>> nodes;
    Status status = Status::COMPLETED;
    std::optional<T> pole_estimate;

    ScalarField field() const { return is_complex_v<T> ? ScalarField::COMPLEX : ScalarField::REAL; }
    double t_end() const { return nodes.empty() ? 0.0 : nodes.back().t; }
};

/// The value recorded in a node's C column: the PIV constraint for the PIV
/// family, the kind's own cleared residual for XVII/XXIX/XXXII (also a first
/// integral of their third-order flow), and the PIV0 constraint of w = f^2 for
/// the square-root equation.
template <Scalar T>
T monitor_c(EquationKind kind, const Params& p, const Jet3<T>& j) {
    if (is_piv_family(kind)) {
        return constraint_c(p, j);
    }
    if (kind == EquationKind::SQRT_PIV0) {
        const Jet3<T> pushed{j.z, j.w * j.w, 2.0 * j.w * j.w1, 2.0 * j.w1 * j.w1 + 2.0 * j.w * j.w2};
        return constraint_c(Params{}, pushed);
    }
    return residual2(kind, p, j);
}

template <Scalar T>
Jet3<T> complete_initial_data(EquationKind kind, const Params& p, const InitialData<T>& id) {
    validate(kind, p);
    const T z0 = id.z0;
    Jet3<T> jet = std::visit(
        [&](const auto& seed) -> Jet3<T> {
            using S = std::decay_t<decltype(seed)>;
            if constexpr (std::is_same_v<S, NonzeroSeed<T>>) {
                if (seed.w0 == T{}) {
                    throw InvalidInitialData("nonzero seed requires w0 != 0");
                }
                const Jet2<T> j2{z0, seed.w0, seed.w1};
                return {z0, seed.w0, seed.w1, rhs2(kind, p, j2)};
            } else if constexpr (std::is_same_v<S, ZeroSeed<T>>) {
                if (!is_piv_family(kind)) {
                    throw InvalidInitialData("zero seed is only valid for piv and piv0");
                }
                const double sigma = seed.branch == ZeroSign::PLUS ? 1.0 : -1.0;
                return {z0, T{}, T{sigma * p.beta()}, seed.w2};
            } else {
                return {z0, seed.w0, seed.w1, seed.w2};
            }
        },
        id.seed);
    if (kind == EquationKind::SQRT_PIV0) {
        // The square-root equation carries (f, f'); f'' is always derived.
        jet.w2 = rhs2(kind, p, jet.truncate());
    }
    if (!jet.finite()) {
        throw InvalidInitialData("initial data must be finite");
    }
    return jet;
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr std::array<std::array<double, 6>, 7> a{{
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    static constexpr std::array<double, 7> b{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                             -2187.0 / 6784, 11.0 / 84, 0.0};
    // b - b_hat
    static constexpr std::array<double, 7> e{71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                             -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
};

template <Scalar T>
using State = std::array<T, 3>;

inline std::size_t state_dim(EquationKind kind) { return is_third_order(kind) ? 3 : 2; }

template <Scalar T>
State<T> derivative(EquationKind kind, const Params& p, const T& z, const State<T>& y, const T& d) {
    if (is_third_order(kind)) {
        return {d * y[1], d * y[2], d * rhs3(kind, p, z, y[0], y[1])};
    }
    return {d * y[1], d * rhs2(kind, p, Jet2<T>{z, y[0], y[1]}), T{}};
}

template <Scalar T>
struct RawStep {
    State<T> y;
    double error = 0.0;
};

template <Scalar T>
RawStep<T> dopri_step(EquationKind kind, const Params& p, const T& z, const State<T>& y0, double h,
                      const T& d, const Tolerances& tol) {
    using DP = DormandPrince;
    const std::size_t n = state_dim(kind);
    std::array<State<T>, 7> k{};
    for (std::size_t s = 0; s < 7; ++s) {
        State<T> ys = y0;
        for (std::size_t r = 0; r < s; ++r) {
            const double coef = DP::a[s][r];
            if (coef == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                ys[i] += h * coef * k[r][i];
            }
        }
        k[s] = derivative(kind, p, T{z + DP::c[s] * h * d}, ys, d);
    }
    RawStep<T> out{y0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        T incr{};
        T err{};
        for (std::size_t s = 0; s < 7; ++s) {
            incr += DP::b[s] * k[s][i];
            err += DP::e[s] * k[s][i];
        }
        out.y[i] = y0[i] + h * incr;
        err *= h;
        if (!is_finite(out.y[i]) || !is_finite(err)) {
            throw NonFiniteState("step produced a non-finite state");
        }
        using std::abs;
        const double scale = tol.abs + tol.rel * std::max(abs(y0[i]), abs(out.y[i]));
        out.error = std::max(out.error, abs(err) / scale);
    }
    return out;
}

template <Scalar T>
State<T> to_state(const Jet3<T>& j) {
    return {j.w, j.w1, j.w2};
}

template <Scalar T>
Jet3<T> to_jet(EquationKind kind, const Params& p, const T& z, const State<T>& y) {
    Jet3<T> j{z, y[0], y[1], y[2]};
    if (!is_third_order(kind)) {
        j.w2 = rhs2(kind, p, j.truncate());
    }
    return j;
}

template <Scalar T>
void validate_direction(const T& d) {
    using std::abs;
    if constexpr (is_complex_v<T>) {
        if (!is_finite(d) || std::abs(abs(d) - 1.0) > 1e-12) {
            throw InvalidInitialData("path direction must have unit modulus");
        }
    } else {
        if (d != 1.0 && d != -1.0) {
            throw InvalidInitialData("real direction must be +1 or -1");
        }
    }
}

} // namespace detail

template <Scalar T>
struct StepResult {
    Jet3<T> jet;
    double error = 0.0;
};

/// One Dormand-Prince 5(4) step of path length h in direction d. The error is
/// the embedded difference in the mixed norm max_i |e_i| / (abs + rel |y_i|).
template <Scalar T>
StepResult<T> step(EquationKind kind, const Params& p, const Jet3<T>& j, double h, const T& direction = T{1.0},
                   const Tolerances& tol = {}) {
    if (h == 0.0) {
        throw InvalidInitialData("step size must be nonzero");
    }
    const auto raw = detail::dopri_step(kind, p, j.z, detail::to_state(j), h, direction, tol);
    const T z_new = j.z + h * direction;
    return {detail::to_jet(kind, p, z_new, raw.y), raw.error};
}

template <Scalar T>
Trajectory<T> integrate(EquationKind kind, const Params& p, const InitialData<T>& id, double span_length,
                        const Tolerances& tol = {}) {
    using std::abs;
    tol.validate();
    detail::validate_direction(id.direction);
    if (!(span_length > 0.0) || !std::isfinite(span_length)) {
        throw InvalidInitialData("span length must be positive and finite");
    }

    Trajectory<T> traj;
    traj.kind = kind;
    traj.params = p;
    traj.tol = tol;
    traj.z0 = id.z0;
    traj.direction = id.direction;
    traj.span = span_length;

    const Jet3<T> seed = complete_initial_data(kind, p, id);
    auto record = [&](double t, const Jet3<T>& jet, double h, double err) {
        traj.nodes.push_back({t, jet, h, err, monitor_c(kind, p, jet), residual2(kind, p, jet)});
    };
    record(0.0, seed, 0.0, 0.0);

    if (abs(seed.w) > tol.pole_cutoff) {
        throw InvalidInitialData("initial |w| exceeds the pole cutoff");
    }

    constexpr double safety = 0.9;
    constexpr double min_factor = 0.2;
    constexpr double max_factor = 5.0;
    constexpr double beta_i = 0.7 / 5.0;
    constexpr double beta_p = 0.4 / 5.0;

    double t = 0.0;
    double h = std::min(tol.h_init, span_length);
    double err_prev = 1e-4;
    bool last_failure_nonfinite = false;
    detail::State<T> y = detail::to_state(seed);

    auto w_growing = [&]() {
        const auto& nodes = traj.nodes;
        if (nodes.size() < 2) {
            return false;
        }
        return abs(nodes.back().jet.w) > abs(nodes[nodes.size() - 2].jet.w);
    };

    while (t < span_length) {
        if (h < tol.h_min) {
            if (last_failure_nonfinite && w_growing()) {
                traj.status = Status::POLE;
            } else {
                traj.status = Status::STEP_UNDERFLOW;
            }
            break;
        }
        const bool final_step = t + h >= span_length;
        const double h_try = final_step ? span_length - t : h;
        const T z_here = traj.nodes.back().jet.z;

        detail::RawStep<T> trial;
        try {
            trial = detail::dopri_step(kind, p, z_here, y, h_try, id.direction, tol);
        } catch (const NonFiniteState&) {
            last_failure_nonfinite = true;
            h = h_try * min_factor;
            continue;
        }

        if (trial.error > 1.0) {
            last_failure_nonfinite = false;
            h = h_try * std::max(min_factor, safety * std::pow(trial.error, -1.0 / 5.0));
            continue;
        }

        if (abs(trial.y[0]) > tol.pole_cutoff) {
            traj.status = Status::POLE;
            break;
        }

        const double t_new = final_step ? span_length : t + h_try;
        const T z_new = id.z0 + t_new * id.direction;
        record(t_new, detail::to_jet(kind, p, z_new, trial.y), h_try, trial.error);
        y = trial.y;
        t = t_new;
        last_failure_nonfinite = false;

        double factor = max_factor;
        if (trial.error > 0.0) {
            factor = safety * std::pow(trial.error, -beta_i) * std::pow(err_prev, beta_p);
            factor = std::clamp(factor, min_factor, max_factor);
        }
        err_prev = std::max(trial.error, 1e-4);
        h = h_try * factor;
    }

    if (traj.status == Status::POLE && traj.nodes.size() >= 2) {
        // 1/w is locally linear near a simple pole.
        const auto& n1 = traj.nodes[traj.nodes.size() - 2].jet;
        const auto& n2 = traj.nodes.back().jet;
        const T u1 = T{1.0} / n1.w;
        const T u2 = T{1.0} / n2.w;
        if (u2 != u1) {
            traj.pole_estimate = n2.z - u2 * (n2.z - n1.z) / (u2 - u1);
        }
    }
    return traj;
}

namespace detail {

// Quintic Hermite basis on s in [0, 1]: values, first and second derivatives.
struct HermiteBasis {
    std::array<double, 6> v;
    std::array<double, 6> d1;
    std::array<double, 6> d2;
};

inline HermiteBasis quintic_hermite(double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double s5 = s4 * s;
    HermiteBasis b{};
    b.v = {1 - 10 * s3 + 15 * s4 - 6 * s5,     s - 6 * s3 + 8 * s4 - 3 * s5,
           0.5 * (s2 - 3 * s3 + 3 * s4 - s5), 10 * s3 - 15 * s4 + 6 * s5,
           -4 * s3 + 7 * s4 - 3 * s5,          0.5 * (s3 - 2 * s4 + s5)};
    b.d1 = {-30 * s2 + 60 * s3 - 30 * s4,      1 - 18 * s2 + 32 * s3 - 15 * s4,
            0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4), 30 * s2 - 60 * s3 + 30 * s4,
            -12 * s2 + 28 * s3 - 15 * s4,      0.5 * (3 * s2 - 8 * s3 + 5 * s4)};
    b.d2 = {-60 * s + 180 * s2 - 120 * s3,     -36 * s + 96 * s2 - 60 * s3,
            0.5 * (2 - 18 * s + 36 * s2 - 20 * s3), 60 * s - 180 * s2 + 120 * s3,
            -24 * s + 84 * s2 - 60 * s3,       0.5 * (6 * s - 24 * s2 + 20 * s3)};
    return b;
}

} // namespace detail

/// Dense output at path parameter t in [0, t_end].
template <Scalar T>
Jet3<T> dense_eval_at(const Trajectory<T>& traj, double t) {
    const auto& nodes = traj.nodes;
    if (nodes.empty() || !(t >= nodes.front().t) || !(t <= nodes.back().t)) {
        throw OutOfSpan("dense_eval: point outside the integrated span");
    }
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                               [](const Node<T>& n, double value) { return n.t < value; });
    if (it->t == t) {
        return it->jet;
    }
    const Node<T>& right = *it;
    const Node<T>& left = *(it - 1);
    const double h = right.t - left.t;
    const double s = (t - left.t) / h;
    const auto b = detail::quintic_hermite(s);
    const T d = traj.direction;
    const T d2 = d * d;
    // Derivatives with respect to the path parameter, scaled to the unit interval.
    const std::array<T, 6> coef{left.jet.w,           h * d * left.jet.w1,  h * h * d2 * left.jet.w2,
                                right.jet.w,          h * d * right.jet.w1, h * h * d2 * right.jet.w2};
    T w{}, ws{}, wss{};
    for (std::size_t i = 0; i < 6; ++i) {
        w += b.v[i] * coef[i];
        ws += b.d1[i] * coef[i];
        wss += b.d2[i] * coef[i];
    }
    const T z = traj.z0 + t * d;
    return {z, w, ws / (h * d), wss / (h * h * d2)};
}

/// Path parameter of z, or OutOfSpan if z is not on the integrated segment.
template <Scalar T>
double path_parameter(const Trajectory<T>& traj, const T& z) {
    if constexpr (is_complex_v<T>) {
        const T rel = (z - traj.z0) * std::conj(traj.direction);
        const double scale = std::max(1.0, std::abs(z));
        if (std::abs(rel.imag()) > 1e-12 * scale) {
            throw OutOfSpan("dense_eval: z is not on the integration path");
        }
        return rel.real();
    } else {
        return (z - traj.z0) * traj.direction;
    }
}

template <Scalar T>
Jet3<T> dense_eval(const Trajectory<T>& traj, const T& z) {
    double t = path_parameter(traj, z);
    // Snap rounding noise at the two ends onto the span.
    const double end = traj.t_end();
    const double eps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, end);
    if (t < 0.0 && t > -eps) {
        t = 0.0;
    } else if (t > end && t < end + eps) {
        t = end;
    }
    return dense_eval_at(traj, t);
}

} // namespace painleve
