#pragma once

// Randomized property suites behind `painleve verify`.
//
// Jet-level suites draw entries uniformly from [-10, 10] (|w| >= 1e-3 wherever
// w divides). Integration suites draw O(1) data so that trajectories stay in a
// range where double precision resolves the monitored quantities; drifts of
// polynomial first integrals are measured relative to the magnitude of their
// largest term, since that magnitude grows like |w|^4 near a pole.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/equations.hpp"
#include "painleve/integrator.hpp"
#include "painleve/io.hpp"
#include "painleve/oracles.hpp"
#include "painleve/zeros.hpp"

namespace painleve {

struct PropertyResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyResult> properties;

    bool passed() const {
        return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
    }
};

inline constexpr std::array<std::string_view, 5> kSuites{"identities", "constraint", "closed-forms",
                                                         "xxix-integrals", "sqrt"};

/// Largest term magnitude of C (at least 1).
template <Scalar T>
double constraint_scale(const Params& p, const Jet3<T>& j) {
    using std::abs;
    const double w = abs(j.w);
    const double w_sq = w * w;
    return std::max({1.0, 2.0 * w * abs(j.w2), abs(j.w1) * abs(j.w1), 3.0 * w_sq * w_sq,
                     8.0 * abs(j.z) * w_sq * w, 4.0 * abs(j.z * j.z - p.alpha()) * w_sq, p.beta() * p.beta()});
}

/// Largest |C(z) - C(z0)| over the nodes, absolute and relative to constraint_scale.
template <Scalar T>
std::pair<double, double> constraint_drift(const Trajectory<T>& traj) {
    using std::abs;
    const auto& first = traj.nodes.front();
    const double s0 = constraint_scale(traj.params, first.jet);
    double worst_abs = 0.0;
    double worst_rel = 0.0;
    for (const auto& n : traj.nodes) {
        const double d = abs(n.C - first.C);
        worst_abs = std::max(worst_abs, d);
        worst_rel = std::max(worst_rel, d / std::max(s0, constraint_scale(traj.params, n.jet)));
    }
    return {worst_abs, worst_rel};
}

struct XXIXDrift {
    double k_abs = 0.0, K_abs = 0.0, L_abs = 0.0, L_max_abs = 0.0;
    double k_rel = 0.0, K_rel = 0.0, L_rel = 0.0, L_max_rel = 0.0;
};

inline XXIXDrift xxix_drift(const Trajectory<double>& traj) {
    XXIXDrift d;
    const auto i0 = xxix_integrals(traj.nodes.front().jet);
    auto k_scale = [](const Jet3<double>& j) { return std::max({1.0, std::abs(j.w2), 2.0 * std::abs(j.w * j.w * j.w)}); };
    auto L_scale = [](const Jet3<double>& j, double K) {
        return std::max({1.0, j.w1 * j.w1, j.w * j.w * j.w * j.w, std::abs(K * j.w)});
    };
    const double ks0 = k_scale(traj.nodes.front().jet);
    const double Ls0 = L_scale(traj.nodes.front().jet, i0.K);
    for (const auto& n : traj.nodes) {
        const auto in = xxix_integrals(n.jet);
        const double ks = std::max(ks0, k_scale(n.jet));
        const double Ls = std::max(Ls0, L_scale(n.jet, in.K));
        d.k_abs = std::max(d.k_abs, std::abs(in.k - i0.k));
        d.K_abs = std::max(d.K_abs, std::abs(in.K - i0.K));
        d.L_abs = std::max(d.L_abs, std::abs(in.L - i0.L));
        d.L_max_abs = std::max(d.L_max_abs, std::abs(in.L));
        d.k_rel = std::max(d.k_rel, std::abs(in.k - i0.k) / ks);
        d.K_rel = std::max(d.K_rel, std::abs(in.K - i0.K) / (2.0 * ks));
        d.L_rel = std::max(d.L_rel, std::abs(in.L - i0.L) / Ls);
        d.L_max_rel = std::max(d.L_max_rel, std::abs(in.L) / Ls);
    }
    return d;
}

namespace detail {

class Draws {
public:
    explicit Draws(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double sign() { return uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }
    /// Uniform in [-hi, hi] with |x| >= lo.
    double away_from_zero(double lo, double hi) {
        double x = 0.0;
        do {
            x = uniform(-hi, hi);
        } while (std::abs(x) < lo);
        return x;
    }

private:
    std::mt19937_64 rng_;
};

inline PropertyResult make_result(std::string name, double worst, double threshold, std::string detail = {}) {
    return {std::move(name), worst < threshold, worst, threshold, std::move(detail)};
}

inline double relative(double value, double scale) { return scale > 0.0 ? value / scale : value; }

} // namespace detail

inline SuiteReport verify_identities(std::uint64_t seed, std::size_t count) {
    detail::Draws draw(seed);
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const Jet3<double> j{draw.uniform(-10, 10), draw.away_from_zero(1e-3, 10), draw.uniform(-10, 10),
                             draw.uniform(-10, 10)};
        const double w3 = draw.uniform(-10, 10);
        const auto d = jet_identities(j, w3);
        worst1 = std::max(worst1, detail::relative(std::abs(d.delta1), d.scale1));
        worst2 = std::max(worst2, detail::relative(std::abs(*d.delta2), d.scale2));

        // The same identities hold on complex jets.
        const std::complex<double> wc{j.w, draw.uniform(-10, 10)};
        const Jet3<std::complex<double>> jc{{j.z, 0.5}, wc, {j.w1, -1.0}, {j.w2, 2.0}};
        const auto dc = jet_identities(jc, std::complex<double>{w3, 1.0});
        worst1 = std::max(worst1, detail::relative(std::abs(dc.delta1), dc.scale1));
        worst2 = std::max(worst2, detail::relative(std::abs(*dc.delta2), dc.scale2));
    }
    SuiteReport r{"identities", {}};
    r.properties.push_back(detail::make_result("(2w w'' - w'^2)' = 2w w''' (relative)", worst1, 1e-12));
    r.properties.push_back(detail::make_result("(w'^2/w)' = (w'/w^2)(2w w'' - w'^2) (relative)", worst2, 1e-12));
    return r;
}

/// Options of the randomized PIV' conservation experiment.
struct ConstraintDraw {
    double param_range = 1.0;
    double jet_range = 1.0;
    double span = 2.0;
    Tolerances tol{};
};

struct ConstraintRun {
    Params params;
    InitialData<double> id;
    bool raw = false;
    Trajectory<double> traj;
    double drift_abs = 0.0;
    double drift_rel = 0.0;
};

/// Random PIV' runs: alternate seeds are completed from PIV (C = 0) and raw
/// third-order data (C != 0 in general).
inline std::vector<ConstraintRun> constraint_runs(std::uint64_t seed, std::size_t count, const ConstraintDraw& cfg = {}) {
    detail::Draws draw(seed);
    std::vector<ConstraintRun> runs;
    runs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ConstraintRun run;
        run.params = Params{draw.uniform(-cfg.param_range, cfg.param_range), draw.uniform(-cfg.param_range, cfg.param_range)};
        const double z0 = draw.uniform(-cfg.jet_range, cfg.jet_range);
        const double d = draw.sign();
        run.raw = i % 2 == 1;
        if (run.raw) {
            run.id = {z0,
                      RawSeed<double>{draw.uniform(-cfg.jet_range, cfg.jet_range), draw.uniform(-cfg.jet_range, cfg.jet_range),
                                      draw.uniform(-cfg.jet_range, cfg.jet_range)},
                      d};
        } else {
            run.id = {z0, NonzeroSeed<double>{draw.away_from_zero(1e-3, cfg.jet_range), draw.uniform(-cfg.jet_range, cfg.jet_range)},
                      d};
        }
        run.traj = integrate(EquationKind::PIV, run.params, run.id, cfg.span, cfg.tol);
        std::tie(run.drift_abs, run.drift_rel) = constraint_drift(run.traj);
        runs.push_back(std::move(run));
    }
    return runs;
}

inline SuiteReport verify_constraint(std::uint64_t seed, std::size_t count) {
    const ConstraintDraw cfg{};
    const auto runs = constraint_runs(seed, count, cfg);
    double worst_rel = 0.0;
    double worst_abs = 0.0;
    std::size_t poles = 0;
    std::size_t nonzero_c = 0;
    for (const auto& run : runs) {
        worst_rel = std::max(worst_rel, run.drift_rel);
        worst_abs = std::max(worst_abs, run.drift_abs);
        poles += run.traj.status == Status::POLE ? 1 : 0;
        nonzero_c += run.raw ? 1 : 0;
    }

    // Pointwise algebra on independent jets.
    detail::Draws draw(seed ^ 0x9e3779b97f4a7c15ULL);
    double worst_consistency = 0.0;
    double worst_agreement = 0.0;
    for (std::size_t i = 0; i < std::max<std::size_t>(count, 100); ++i) {
        const Params p{draw.uniform(-10, 10), draw.uniform(-10, 10)};
        Jet3<double> j{draw.uniform(-10, 10), draw.away_from_zero(1e-3, 10), draw.uniform(-10, 10), draw.uniform(-10, 10)};
        worst_agreement = std::max(worst_agreement, std::abs(constraint_c(p, j) - residual2(EquationKind::PIV, p, j)) /
                                                        constraint_scale(p, j));
        j.w2 = rhs2(EquationKind::PIV, p, j.truncate());
        worst_consistency = std::max(worst_consistency, std::abs(constraint_c(p, j)) / constraint_scale(p, j));
    }

    const double budget = 1e3 * cfg.tol.rel * cfg.span;
    SuiteReport r{"constraint", {}};
    r.properties.push_back(detail::make_result(
        "C drift along PIV' runs (relative to term scale)", worst_rel, budget,
        std::to_string(runs.size()) + " runs, " + std::to_string(poles) + " ended at a pole, " +
            std::to_string(nonzero_c) + " raw seeds (C != 0); worst absolute drift " + format_number(worst_abs)));
    r.properties.push_back(detail::make_result("C = 0 on jets completed from PIV (relative)", worst_consistency, 1e-13));
    r.properties.push_back(detail::make_result("residual2(PIV) = C (relative)", worst_agreement, 1e-14));
    return r;
}

inline SuiteReport verify_closed_forms(std::uint64_t seed, std::size_t count) {
    detail::Draws draw(seed);
    double worst_fit = 0.0;
    double worst_disc = 0.0;
    double worst_u_const = 0.0;
    double worst_u_vs_a = 0.0;
    double worst_rival = 0.0;
    std::size_t u_runs = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const EquationKind kind = i % 2 == 0 ? EquationKind::XXXII : EquationKind::XVII;
        const double z0 = draw.uniform(-2, 2);
        const double w0 = draw.away_from_zero(0.5, 3);
        const double w1 = draw.uniform(-3, 3);
        const double span = draw.uniform(1, 10);
        const double d = draw.sign();
        const auto traj = integrate(kind, Params{}, InitialData<double>{z0, NonzeroSeed<double>{w0, w1}, d}, span);
        const auto q = fit_quadratic(kind, Jet2<double>{z0, w0, w1});
        worst_disc = std::max(worst_disc, std::abs(q.discriminant() - required_discriminant(kind)));
        for (const auto& n : traj.nodes) {
            worst_fit = std::max(worst_fit, std::abs(n.jet.w - eval_quadratic(q, n.jet.z).w));
            // w'^2 = 1 + 4 a w (XXXII) and w'^2 = 4 a w (XVII).
            const double offset = kind == EquationKind::XXXII ? 1.0 : 0.0;
            const double lhs = n.jet.w1 * n.jet.w1;
            const double rhs = offset + 4.0 * q.a * n.jet.w;
            worst_rival = std::max(worst_rival, std::abs(lhs - rhs) / std::max({1.0, lhs, std::abs(rhs)}));
        }
        if (kind == EquationKind::XXXII && traj.nodes.size() > 1) {
            bool positive = std::all_of(traj.nodes.begin(), traj.nodes.end(), [](const auto& n) { return n.jet.w > 0.0; });
            if (positive) {
                ++u_runs;
                const double K0 = xxxii_u_integral(traj.nodes.front().jet.truncate(), 1);
                for (const auto& n : traj.nodes) {
                    const double K = xxxii_u_integral(n.jet.truncate(), i % 4 == 0 ? 1 : -1);
                    worst_u_const = std::max(worst_u_const, std::abs(K - K0));
                    worst_u_vs_a = std::max(worst_u_vs_a, std::abs(K - q.a));
                }
            }
        }
    }
    SuiteReport r{"closed-forms", {}};
    r.properties.push_back(detail::make_result("XXXII/XVII trajectories match the fitted quadratic (abs)", worst_fit, 1e-9));
    r.properties.push_back(detail::make_result("discriminant 1 (XXXII) / 0 (XVII)", worst_disc, 1e-12));
    r.properties.push_back(detail::make_result("w'^2 = 1 + 4aw (XXXII), w'^2 = 4aw (XVII) (relative)", worst_rival, 1e-9));
    r.properties.push_back(detail::make_result("u-substitution K constant along XXXII (abs)", worst_u_const, 1e-8,
                                               std::to_string(u_runs) + " runs with w > 0"));
    r.properties.push_back(detail::make_result("u-substitution K equals fitted a (abs)", worst_u_vs_a, 1e-8));
    return r;
}

inline SuiteReport verify_xxix_integrals(std::uint64_t seed, std::size_t count) {
    detail::Draws draw(seed);
    const Tolerances tol{};
    const double span = 2.0;
    const double budget = 1e3 * tol.rel * span;
    double worst_k = 0.0, worst_K = 0.0, worst_L = 0.0, worst_L_zero = 0.0, worst_pole = 0.0, worst_family = 0.0;
    std::size_t pole_runs = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double z0 = draw.uniform(-1, 1);
        const double w0 = draw.away_from_zero(0.2, 1);
        const double w1 = draw.uniform(-1, 1);
        const bool raw = i % 2 == 1;
        InitialData<double> id{z0, NonzeroSeed<double>{w0, w1}, draw.sign()};
        if (raw) {
            id.seed = RawSeed<double>{w0, w1, draw.uniform(-1, 1)};
        }
        const auto traj = integrate(EquationKind::XXIX, Params{}, id, span, tol);
        const auto d = xxix_drift(traj);
        worst_k = std::max(worst_k, d.k_rel);
        worst_K = std::max(worst_K, d.K_rel);
        worst_L = std::max(worst_L, d.L_rel);
        if (!raw) {
            worst_L_zero = std::max(worst_L_zero, d.L_max_rel);
        }

        // A seed on the exact family w = 1/(pole - z) runs into its pole.
        const double pole = z0 + 1.0 / w0;
        const auto fam = integrate(EquationKind::XXIX, Params{},
                                   InitialData<double>{z0, NonzeroSeed<double>{w0, w0 * w0}, w0 > 0 ? 1.0 : -1.0}, 6.0, tol);
        if (fam.status == Status::POLE && fam.pole_estimate) {
            ++pole_runs;
            worst_pole = std::max(worst_pole, std::abs(*fam.pole_estimate - pole));
        } else {
            worst_pole = std::max(worst_pole, 1.0);
        }
        const double zf = pole - draw.away_from_zero(0.05, 2.0);
        worst_family = std::max(worst_family, std::abs(residual2(EquationKind::XXIX, Params{}, xxix_pole_family(pole, zf))) /
                                                  std::pow(std::abs(1.0 / (pole - zf)), 4.0));
    }
    SuiteReport r{"xxix-integrals", {}};
    r.properties.push_back(detail::make_result("k = w'' - 2w^3 constant (relative)", worst_k, budget));
    r.properties.push_back(detail::make_result("K = 2k constant (relative)", worst_K, budget));
    r.properties.push_back(detail::make_result("L constant (relative)", worst_L, budget));
    r.properties.push_back(detail::make_result("L = 0 on solutions of XXIX (relative)", worst_L_zero, budget));
    r.properties.push_back(detail::make_result("pole of w = 1/(C - z) located (abs)", worst_pole, 1e-3,
                                               std::to_string(pole_runs) + " pole runs"));
    r.properties.push_back(detail::make_result("pole family solves XXIX (relative)", worst_family, 1e-14));
    return r;
}

inline SuiteReport verify_sqrt(std::uint64_t seed, std::size_t count) {
    detail::Draws draw(seed);
    double worst_push = 0.0;
    double worst_lift = 0.0;
    double worst_jump = 0.0;
    std::size_t compared = 0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t0 = draw.uniform(-1, 1);
        const double f0 = draw.uniform(-1, 1);
        const double f1 = draw.uniform(-1.5, 1.5);
        const double d = draw.sign();
        const auto ftraj = integrate(EquationKind::SQRT_PIV0, Params{}, InitialData<double>{t0, RawSeed<double>{f0, f1, 0.0}, d}, 1.0);
        for (const auto& n : ftraj.nodes) {
            const auto w = square_push(n.jet.truncate());
            worst_push = std::max(worst_push, std::abs(residual2(EquationKind::PIV0, Params{}, w)) / constraint_scale(Params{}, w));
        }
        if (ftraj.status != Status::COMPLETED) {
            continue;
        }

        const Jet3<double> w_seed = square_push(Jet2<double>{t0, f0, f1});
        const auto wtraj =
            integrate(EquationKind::PIV0, Params{}, InitialData<double>{t0, RawSeed<double>{w_seed.w, w_seed.w1, w_seed.w2}, d}, 1.0);
        if (wtraj.status != Status::COMPLETED) {
            continue;
        }
        const auto events = locate_zeros(wtraj);
        if (events.size() > 1) {
            continue;
        }
        const double lo = std::min(wtraj.nodes.front().jet.z, wtraj.nodes.back().jet.z);
        const double hi = std::max(wtraj.nodes.front().jet.z, wtraj.nodes.back().jet.z);
        std::optional<ZeroEvent<double>> ev;
        if (!events.empty()) {
            ev = events.front();
            ++crossings;
        }
        const auto lift = sqrt_lift(wtraj, ev, lo, hi);
        // The lift fixes f < 0 before the zero; -f solves the same equation.
        const double probe_t = lift.samples.back().t;
        const double ref_back = dense_eval(ftraj, probe_t).w;
        const double flip = (ref_back < 0.0) == (lift.samples.back().f < 0.0) ? 1.0 : -1.0;
        for (const auto& s : lift.samples) {
            worst_lift = std::max(worst_lift, std::abs(s.f - flip * dense_eval(ftraj, s.t).w));
        }
        worst_jump = std::max(worst_jump, lift.slope_jump);
        ++compared;
    }
    SuiteReport r{"sqrt", {}};
    r.properties.push_back(detail::make_result("square_push of SQRT_PIV0 solves PIV0 (relative)", worst_push, 1e-12));
    r.properties.push_back(detail::make_result("sqrt_lift of PIV0 reproduces f (abs)", worst_lift, 1e-7,
                                               std::to_string(compared) + " runs, " + std::to_string(crossings) + " through a zero"));
    r.properties.push_back(detail::make_result("f' continuous through the zero", worst_jump, 1e-7));
    return r;
}

inline std::size_t default_count(std::string_view suite) {
    if (suite == "identities") {
        return 1000;
    }
    if (suite == "constraint" || suite == "closed-forms") {
        return 50;
    }
    return 20;
}

inline SuiteReport run_suite(std::string_view suite, std::uint64_t seed, std::size_t count) {
    if (suite == "identities") {
        return verify_identities(seed, count);
    }
    if (suite == "constraint") {
        return verify_constraint(seed, count);
    }
    if (suite == "closed-forms") {
        return verify_closed_forms(seed, count);
    }
    if (suite == "xxix-integrals") {
        return verify_xxix_integrals(seed, count);
    }
    if (suite == "sqrt") {
        return verify_sqrt(seed, count);
    }
    throw Error("unknown verify suite: " + std::string(suite));
}

} // namespace painleve
