#pragma once

// Zero location along integrated trajectories.
//
// Real mode finds sign changes of w between nodes (refined by bisection on the
// dense output) and tangential zeros, i.e. local minima of |w| below a trigger,
// refined by golden-section search. Complex mode only sees |w| minima, since a
// zero generically misses a fixed line.
//
// For PIV a zero a forces w'(a) = +beta or -beta, and for beta = 0 an isolated
// zero has w''(a) != 0. Events are classified against both statements.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "painleve/equations.hpp"
#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"

namespace painleve {

enum class ZeroBranch { PLUS_BETA, MINUS_BETA, UNRESOLVED };

inline std::string_view to_string(ZeroBranch b) {
    switch (b) {
    case ZeroBranch::PLUS_BETA: return "PLUS_BETA";
    case ZeroBranch::MINUS_BETA: return "MINUS_BETA";
    case ZeroBranch::UNRESOLVED: return "UNRESOLVED";
    }
    return "?";
}

template <Scalar T>
struct ZeroEvent {
    T a{};             ///< refined location
    double t = 0.0;    ///< path parameter of a
    T slope{};         ///< w'(a)
    T curvature{};     ///< w''(a)
    double abs_w = 0.0;
    ZeroBranch branch = ZeroBranch::UNRESOLVED;
    bool curvature_nonzero = false; ///< only set on beta = 0 PIV-family runs
    bool isolated = true;           ///< no other event within 10 local steps
};

struct ZeroScanOptions {
    double slope_tol = 1e-6;
    double curv_floor = 1e-8;
    double trigger_fraction = 1e-4;
    int max_iterations = 60;
    double isolation_steps = 10.0;
};

namespace detail {

struct Refinement {
    double t = 0.0;
    double abs_w = 0.0;
    std::vector<double> history; ///< best |w| after each iteration
};

template <Scalar T>
double real_w(const Trajectory<T>& traj, double t) {
    if constexpr (is_complex_v<T>) {
        return dense_eval_at(traj, t).w.real();
    } else {
        return dense_eval_at(traj, t).w;
    }
}

template <Scalar T>
double abs_w_at(const Trajectory<T>& traj, double t) {
    using std::abs;
    return abs(dense_eval_at(traj, t).w);
}

/// Bisection of a real sign change of w on [lo, hi]; reports the best point seen.
inline Refinement bisect_sign_change(const Trajectory<double>& traj, double lo, double hi, double abs_tol,
                                     int max_iterations) {
    double w_lo = real_w(traj, lo);
    Refinement r;
    r.t = std::abs(w_lo) <= std::abs(real_w(traj, hi)) ? lo : hi;
    r.abs_w = std::abs(real_w(traj, r.t));
    for (int it = 0; it < max_iterations && r.abs_w >= abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double w_mid = real_w(traj, mid);
        if (std::abs(w_mid) < r.abs_w) {
            r.t = mid;
            r.abs_w = std::abs(w_mid);
        }
        r.history.push_back(r.abs_w);
        if ((w_mid < 0.0) == (w_lo < 0.0)) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    return r;
}

/// Golden-section minimization of g on [lo, hi].
template <class G>
double golden_section(G&& g, double lo, double hi, int max_iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double g1 = g(x1);
    double g2 = g(x2);
    for (int it = 0; it < max_iterations && x1 < x2; ++it) {
        if (g1 <= g2) {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    return g1 <= g2 ? x1 : x2;
}

/// Extremum of a real w near a tangential zero: golden-section on sigma * w,
/// then bisection on w' inside a small bracket around the golden point.
inline double real_extremum(const Trajectory<double>& traj, double lo, double hi, double sigma,
                            int max_iterations) {
    const double t_g = golden_section([&](double t) { return sigma * real_w(traj, t); }, lo, hi, max_iterations);
    const double width = std::max(1e-6 * (hi - lo), 64.0 * std::numeric_limits<double>::epsilon() * std::abs(t_g));
    double a = std::max(lo, t_g - width);
    double b = std::min(hi, t_g + width);
    auto slope = [&](double t) { return sigma * traj.direction * dense_eval_at(traj, t).w1; };
    double s_a = slope(a);
    if (!(s_a < 0.0 && slope(b) > 0.0)) {
        return t_g;
    }
    for (int it = 0; it < max_iterations; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double s_mid = slope(mid);
        if (s_mid < 0.0) {
            a = mid;
            s_a = s_mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

template <Scalar T>
double local_step(const Trajectory<T>& traj, double t) {
    const auto& nodes = traj.nodes;
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                               [](const Node<T>& n, double value) { return n.t < value; });
    if (it == nodes.end()) {
        return nodes.back().h;
    }
    if (it->h > 0.0) {
        return it->h;
    }
    return (it + 1 != nodes.end()) ? (it + 1)->h : 0.0;
}

/// Extremal value of the quadratic Taylor model of w at a node. Catches
/// tangential zeros whose nearest node sits above the |w| trigger.
inline double taylor_minimum(const Jet3<double>& j) {
    if (j.w2 == 0.0 || (j.w2 > 0.0) != (j.w > 0.0)) {
        return j.w > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return j.w - j.w1 * j.w1 / (2.0 * j.w2);
}

/// Smallest |w| of the quadratic Taylor model of a complex node along the
/// path, for path offsets s in [s_lo, s_hi].
inline double taylor_path_minimum(const Jet3<std::complex<double>>& j, std::complex<double> d, double s_lo,
                                  double s_hi, int max_iterations) {
    auto model = [&](double s) { return std::abs(j.w + s * d * (j.w1 + 0.5 * s * d * j.w2)); };
    return model(golden_section(model, s_lo, s_hi, max_iterations));
}

struct Candidate {
    double t = 0.0;
    double abs_w = 0.0;
    bool from_sign_change = false;
};

inline std::vector<Candidate> real_candidates(const Trajectory<double>& traj, double trigger,
                                              const ZeroScanOptions& opt) {
    const auto& nodes = traj.nodes;
    const double abs_tol = traj.tol.abs;
    std::vector<Candidate> out;
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = nodes[i].jet.w;
        if (wi == 0.0) {
            out.push_back({nodes[i].t, 0.0, false});
            continue;
        }
        if (i + 1 < n) {
            const double wn = nodes[i + 1].jet.w;
            if (wn != 0.0 && (wi < 0.0) != (wn < 0.0)) {
                const auto r = bisect_sign_change(traj, nodes[i].t, nodes[i + 1].t, abs_tol, opt.max_iterations);
                out.push_back({r.t, r.abs_w, true});
            }
        }
        if (i == 0 || i + 1 == n) {
            continue;
        }
        const double wp = nodes[i - 1].jet.w;
        const double wn = nodes[i + 1].jet.w;
        const bool same_sign = wp != 0.0 && wn != 0.0 && (wp < 0.0) == (wi < 0.0) && (wn < 0.0) == (wi < 0.0);
        if (!same_sign || std::abs(wi) > std::abs(wp) || std::abs(wi) > std::abs(wn)) {
            continue;
        }
        const double sigma = wi > 0.0 ? 1.0 : -1.0;
        if (std::abs(wi) >= trigger && !(sigma * taylor_minimum(nodes[i].jet) < trigger)) {
            continue;
        }
        const double lo = nodes[i - 1].t;
        const double hi = nodes[i + 1].t;
        const double t_min = real_extremum(traj, lo, hi, sigma, opt.max_iterations);
        const double w_min = real_w(traj, t_min);
        if (std::abs(w_min) < abs_tol) {
            out.push_back({t_min, std::abs(w_min), false});
        } else if (sigma * w_min < 0.0) {
            // The dip crosses zero twice between nodes of equal sign.
            const auto r1 = bisect_sign_change(traj, lo, t_min, abs_tol, opt.max_iterations);
            const auto r2 = bisect_sign_change(traj, t_min, hi, abs_tol, opt.max_iterations);
            out.push_back({r1.t, r1.abs_w, true});
            out.push_back({r2.t, r2.abs_w, true});
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.t < y.t; });

    // Two close sign changes around an extremum that itself lies within the
    // zero tolerance are the rounding shadow of one tangential zero.
    std::vector<Candidate> merged;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i + 1 < out.size() && out[i].from_sign_change && out[i + 1].from_sign_change) {
            const double lo = out[i].t;
            const double hi = out[i + 1].t;
            const double gap_limit = opt.isolation_steps * local_step(traj, lo);
            if (hi - lo < gap_limit && hi > lo) {
                // Between the crossings w has the sign of w_mid; its extremum
                // there is the minimum of -sign(w_mid) * w.
                const double w_mid = real_w(traj, 0.5 * (lo + hi));
                const double sigma = w_mid > 0.0 ? -1.0 : 1.0;
                const double t_ext = real_extremum(traj, lo, hi, sigma, opt.max_iterations);
                const double w_ext = real_w(traj, t_ext);
                if (std::abs(w_ext) < abs_tol) {
                    merged.push_back({t_ext, std::abs(w_ext), false});
                    ++i;
                    continue;
                }
            }
        }
        merged.push_back(out[i]);
    }
    return merged;
}

inline std::vector<Candidate> complex_candidates(const Trajectory<std::complex<double>>& traj, double trigger,
                                                 const ZeroScanOptions& opt) {
    const auto& nodes = traj.nodes;
    const double abs_tol = traj.tol.abs;
    std::vector<Candidate> out;
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = std::abs(nodes[i].jet.w);
        if (ai == 0.0) {
            out.push_back({nodes[i].t, 0.0, false});
            continue;
        }
        const bool left_ok = i == 0 || ai <= std::abs(nodes[i - 1].jet.w);
        const bool right_ok = i + 1 == n || ai <= std::abs(nodes[i + 1].jet.w);
        if (!left_ok || !right_ok) {
            continue;
        }
        const double lo = nodes[i == 0 ? 0 : i - 1].t;
        const double hi = nodes[i + 1 == n ? i : i + 1].t;
        if (!(hi > lo)) {
            continue;
        }
        if (ai >= trigger &&
            !(taylor_path_minimum(nodes[i].jet, traj.direction, lo - nodes[i].t, hi - nodes[i].t, opt.max_iterations) <
              trigger)) {
            continue;
        }
        // A long step can hold more than one minimum: sample the bracket and
        // refine each sampled dip.
        constexpr int kSamples = 16;
        std::array<double, kSamples + 1> ts{};
        std::array<double, kSamples + 1> as{};
        for (int k = 0; k <= kSamples; ++k) {
            ts[k] = lo + (hi - lo) * k / kSamples;
            as[k] = abs_w_at(traj, ts[k]);
        }
        for (int k = 0; k <= kSamples; ++k) {
            if ((k > 0 && as[k] > as[k - 1]) || (k < kSamples && as[k] > as[k + 1])) {
                continue;
            }
            const double a = ts[std::max(k - 1, 0)];
            const double b = ts[std::min(k + 1, kSamples)];
            const double t_min = golden_section([&](double t) { return abs_w_at(traj, t); }, a, b, opt.max_iterations);
            const double a_min = abs_w_at(traj, t_min);
            if (a_min < abs_tol) {
                out.push_back({t_min, a_min, false});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.t < y.t; });
    // Overlapping brackets reach the same zero up to the golden-section accuracy.
    std::vector<Candidate> unique;
    for (const auto& c : out) {
        if (!unique.empty() && c.t - unique.back().t < 1e-7 * std::max(1.0, std::abs(c.t))) {
            if (c.abs_w < unique.back().abs_w) {
                unique.back() = c;
            }
            continue;
        }
        unique.push_back(c);
    }
    return unique;
}

} // namespace detail

template <Scalar T>
std::vector<ZeroEvent<T>> locate_zeros(const Trajectory<T>& traj, const ZeroScanOptions& opt) {
    using std::abs;
    std::vector<ZeroEvent<T>> events;
    if (traj.nodes.empty()) {
        return events;
    }
    double max_abs_w = 0.0;
    for (const auto& node : traj.nodes) {
        max_abs_w = std::max(max_abs_w, static_cast<double>(abs(node.jet.w)));
    }
    if (max_abs_w == 0.0) {
        return events; // identically zero: no isolated zeros
    }
    const double trigger = opt.trigger_fraction * max_abs_w;

    std::vector<detail::Candidate> candidates;
    if constexpr (is_complex_v<T>) {
        candidates = detail::complex_candidates(traj, trigger, opt);
    } else {
        candidates = detail::real_candidates(traj, trigger, opt);
    }

    const bool piv = is_piv_family(traj.kind);
    const double beta = traj.params.beta();
    const bool beta_zero = piv && beta == 0.0;
    const double slope_tol = opt.slope_tol * std::max(1.0, std::abs(beta));

    for (const auto& c : candidates) {
        if (!events.empty()) {
            const double prev = events.back().t;
            if (c.t - prev <= 1e-12 * std::max(1.0, std::abs(c.t))) {
                continue; // same point reached from two candidates
            }
        }
        const Jet3<T> jet = dense_eval_at(traj, c.t);
        ZeroEvent<T> ev;
        ev.a = jet.z;
        ev.t = c.t;
        ev.slope = jet.w1;
        ev.curvature = jet.w2;
        ev.abs_w = c.abs_w;
        if (piv) {
            const double d_plus = abs(jet.w1 - beta);
            const double d_minus = abs(jet.w1 + beta);
            if (std::min(d_plus, d_minus) <= slope_tol) {
                ev.branch = d_plus <= d_minus ? ZeroBranch::PLUS_BETA : ZeroBranch::MINUS_BETA;
            }
        }
        if (beta_zero) {
            ev.curvature_nonzero = abs(jet.w2) >= opt.curv_floor;
        }
        events.push_back(ev);
    }

    for (std::size_t i = 0; i < events.size(); ++i) {
        const double gap = opt.isolation_steps * detail::local_step(traj, events[i].t);
        const bool near_prev = i > 0 && events[i].t - events[i - 1].t < gap;
        const bool near_next = i + 1 < events.size() && events[i + 1].t - events[i].t < gap;
        events[i].isolated = !(near_prev || near_next);
    }
    return events;
}

template <Scalar T>
std::vector<ZeroEvent<T>> locate_zeros(const Trajectory<T>& traj, double slope_tol = 1e-6) {
    ZeroScanOptions opt;
    opt.slope_tol = slope_tol;
    return locate_zeros(traj, opt);
}

struct CurvatureViolation {
    std::size_t index = 0;
    double a = 0.0;
    double slope = 0.0;
    double curvature = 0.0;
    std::string reason;
};

struct CurvatureReport {
    std::size_t checked = 0;
    std::vector<CurvatureViolation> violations;
    std::vector<std::size_t> clustered; ///< non-isolated events, not checked

    bool vacuous() const { return checked == 0; }
    bool ok() const { return violations.empty(); }
};

/// For beta = 0 every isolated zero must have w' = 0 and w'' != 0. A violation
/// indicts the integration accuracy or the isolation of the zero.
inline CurvatureReport check_curvature_theorem(const std::vector<ZeroEvent<double>>& events,
                                               const Trajectory<double>& traj, double curv_floor = 1e-8,
                                               double slope_tol = 1e-6) {
    if (!is_piv_family(traj.kind) || traj.params.beta() != 0.0) {
        throw WrongKind("curvature check needs a PIV-family run with beta = 0");
    }
    CurvatureReport report;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        if (!ev.isolated) {
            report.clustered.push_back(i);
            continue;
        }
        ++report.checked;
        if (std::abs(ev.curvature) < curv_floor) {
            report.violations.push_back({i, ev.a, ev.slope, ev.curvature, "curvature below floor"});
        } else if (std::abs(ev.slope) >= slope_tol) {
            report.violations.push_back({i, ev.a, ev.slope, ev.curvature, "slope not zero"});
        }
    }
    return report;
}

} // namespace painleve
