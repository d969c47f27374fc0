#pragma once

// Flat-file serialization of trajectories and zero events.
//
// Trajectory CSV has a mandatory header and one row per accepted node:
//   z_re,z_im,w_re,w_im,w1_re,w1_im,w2_re,w2_im,h,err_est,C_re,C_im,res2_re,res2_im
// Imaginary columns are zero in real mode. Numbers use 17 significant digits,
// which round-trips every double.

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "painleve/equations.hpp"
#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"
#include "painleve/zeros.hpp"

namespace painleve {

inline constexpr std::string_view kCsvHeader =
    "z_re,z_im,w_re,w_im,w1_re,w1_im,w2_re,w2_im,h,err_est,C_re,C_im,res2_re,res2_im";

inline constexpr std::string_view kConventionNote = "Ince XXXI \xCE\xB2\xC2\xB2 convention";

class ParseError : public Error {
public:
    using Error::Error;
};

inline std::string format_number(double x) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

namespace detail {

template <Scalar T>
double re(const T& x) {
    if constexpr (is_complex_v<T>) {
        return x.real();
    } else {
        return x;
    }
}

template <Scalar T>
double im(const T& x) {
    if constexpr (is_complex_v<T>) {
        return x.imag();
    } else {
        return 0.0;
    }
}

} // namespace detail

template <Scalar T>
void write_trajectory_csv(std::ostream& out, const Trajectory<T>& traj) {
    out << kCsvHeader << '\n';
    for (const auto& n : traj.nodes) {
        const std::array<double, 14> row{detail::re(n.jet.z),  detail::im(n.jet.z),  detail::re(n.jet.w),
                                         detail::im(n.jet.w),  detail::re(n.jet.w1), detail::im(n.jet.w1),
                                         detail::re(n.jet.w2), detail::im(n.jet.w2), n.h,
                                         n.err,                detail::re(n.C),      detail::im(n.C),
                                         detail::re(n.res2),   detail::im(n.res2)};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) {
                out << ',';
            }
            out << format_number(row[i]);
        }
        out << '\n';
    }
}

using CsvRow = std::array<double, 14>;

inline std::vector<CsvRow> read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError("trajectory csv: missing or unexpected header");
    }
    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        CsvRow row{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t i = 0; i < row.size(); ++i) {
            auto [next, ec] = std::from_chars(p, end, row[i]);
            if (ec != std::errc{}) {
                throw ParseError("trajectory csv: bad number on line " + std::to_string(line_no));
            }
            p = next;
            if (i + 1 < row.size()) {
                if (p == end || *p != ',') {
                    throw ParseError("trajectory csv: expected 14 columns on line " + std::to_string(line_no));
                }
                ++p;
            }
        }
        if (p != end) {
            throw ParseError("trajectory csv: trailing data on line " + std::to_string(line_no));
        }
        rows.push_back(row);
    }
    return rows;
}

template <Scalar T>
nlohmann::ordered_json scalar_json(const T& x) {
    if constexpr (is_complex_v<T>) {
        return {{"re", x.real()}, {"im", x.imag()}};
    } else {
        return x;
    }
}

template <Scalar T>
nlohmann::ordered_json events_json(const std::vector<ZeroEvent<T>>& events) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& ev : events) {
        arr.push_back({{"a", scalar_json(ev.a)},
                       {"slope", scalar_json(ev.slope)},
                       {"curvature", scalar_json(ev.curvature)},
                       {"abs_w", ev.abs_w},
                       {"branch", std::string(to_string(ev.branch))},
                       {"curvature_nonzero", ev.curvature_nonzero},
                       {"isolated", ev.isolated}});
    }
    return arr;
}

struct TrajectoryStats {
    double max_abs_c = 0.0;
    double max_abs_res2 = 0.0;
    double max_c_drift = 0.0;
    double max_abs_w = 0.0;
};

template <Scalar T>
TrajectoryStats trajectory_stats(const Trajectory<T>& traj) {
    using std::abs;
    TrajectoryStats s;
    if (traj.nodes.empty()) {
        return s;
    }
    const T c0 = traj.nodes.front().C;
    for (const auto& n : traj.nodes) {
        s.max_abs_c = std::max(s.max_abs_c, static_cast<double>(abs(n.C)));
        s.max_abs_res2 = std::max(s.max_abs_res2, static_cast<double>(abs(n.res2)));
        s.max_c_drift = std::max(s.max_c_drift, static_cast<double>(abs(n.C - c0)));
        s.max_abs_w = std::max(s.max_abs_w, static_cast<double>(abs(n.jet.w)));
    }
    return s;
}

/// Run summary: equation, params, convention note, status, node count, max |C|,
/// max |residual2| and the event list.
template <Scalar T>
nlohmann::ordered_json summary_json(const Trajectory<T>& traj, const std::vector<ZeroEvent<T>>& events) {
    const auto stats = trajectory_stats(traj);
    nlohmann::ordered_json j;
    j["equation"] = std::string(to_string(traj.kind));
    j["params"] = {{"alpha", traj.params.alpha()}, {"beta", traj.params.beta()}};
    j["convention"] = std::string(kConventionNote);
    j["field"] = traj.field() == ScalarField::REAL ? "real" : "complex";
    j["z0"] = scalar_json(traj.z0);
    j["direction"] = scalar_json(traj.direction);
    j["span"] = traj.span;
    j["tolerances"] = {{"rel", traj.tol.rel},
                       {"abs", traj.tol.abs},
                       {"h_init", traj.tol.h_init},
                       {"h_min", traj.tol.h_min},
                       {"pole_cutoff", traj.tol.pole_cutoff}};
    j["status"] = std::string(to_string(traj.status));
    j["pole_estimate"] = traj.pole_estimate ? scalar_json(*traj.pole_estimate) : nlohmann::ordered_json(nullptr);
    j["node_count"] = traj.nodes.size();
    j["max_abs_C"] = stats.max_abs_c;
    j["max_abs_residual2"] = stats.max_abs_res2;
    j["max_C_drift"] = stats.max_c_drift;
    j["max_abs_w"] = stats.max_abs_w;
    j["events"] = events_json(events);
    return j;
}

} // namespace painleve
