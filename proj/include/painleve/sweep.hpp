#pragma once

// Parameter sweeps: one independent real-mode integration per (alpha, beta)
// cell, fanned out over worker threads. Results are stored by cell index, so
// the output order is the grid order whatever the completion order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "painleve/equations.hpp"
#include "painleve/integrator.hpp"
#include "painleve/io.hpp"
#include "painleve/zeros.hpp"

namespace painleve {

struct Axis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    double at(std::size_t i) const {
        if (count <= 1) {
            return min;
        }
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepGrid {
    Axis alpha;
    Axis beta;

    std::size_t size() const { return alpha.count * beta.count; }
};

inline constexpr std::size_t kMaxSweepCells = 1'000'000;

struct SweepCell {
    double alpha = 0.0;
    double beta = 0.0;
    bool failed = false;
    std::string error;
    Status status = Status::COMPLETED;
    std::size_t node_count = 0;
    std::size_t zero_count = 0;
    std::optional<double> pole_estimate;
    double max_c_drift = 0.0;
    /// beta = 0 cells: every zero event has nonzero curvature.
    std::optional<bool> curvature_nonzero;
};

inline SweepCell run_cell(EquationKind kind, double alpha, double beta, const InitialData<double>& id, double span,
                          const Tolerances& tol) {
    SweepCell cell;
    cell.alpha = alpha;
    cell.beta = beta;
    try {
        const Params p{alpha, beta};
        const auto traj = integrate(kind, p, id, span, tol);
        const auto events = locate_zeros(traj);
        cell.status = traj.status;
        cell.node_count = traj.nodes.size();
        cell.zero_count = events.size();
        cell.pole_estimate = traj.pole_estimate;
        cell.max_c_drift = trajectory_stats(traj).max_c_drift;
        if (beta == 0.0) {
            cell.curvature_nonzero =
                std::all_of(events.begin(), events.end(), [](const auto& ev) { return ev.curvature_nonzero; });
        }
        cell.failed = traj.status == Status::STEP_UNDERFLOW;
    } catch (const Error& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

inline std::vector<SweepCell> run_sweep(EquationKind kind, const SweepGrid& grid, const InitialData<double>& id,
                                        double span, const Tolerances& tol, unsigned threads = 1) {
    if (grid.size() == 0) {
        throw InvalidInitialData("sweep grid is empty");
    }
    if (grid.size() > kMaxSweepCells) {
        throw InvalidInitialData("sweep grid exceeds 1e6 cells");
    }
    if (!is_piv_family(kind) || kind == EquationKind::PIV0) {
        throw WrongKind("sweeps run over (alpha, beta) and need --eq piv");
    }
    std::vector<SweepCell> cells(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const std::size_t ia = i / grid.beta.count;
            const std::size_t ib = i % grid.beta.count;
            cells[i] = run_cell(kind, grid.alpha.at(ia), grid.beta.at(ib), id, span, tol);
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    std::vector<std::jthread> pool;
    pool.reserve(n - 1);
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    return cells;
}

inline constexpr std::string_view kSweepHeader =
    "alpha,beta,status,node_count,zero_count,pole_estimate,max_C_drift,curvature_nonzero,error";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << kSweepHeader << '\n';
    for (const auto& c : cells) {
        out << format_number(c.alpha) << ',' << format_number(c.beta) << ','
            << (c.failed && !c.error.empty() ? std::string("FAILED") : std::string(to_string(c.status))) << ','
            << c.node_count << ',' << c.zero_count << ','
            << (c.pole_estimate ? format_number(*c.pole_estimate) : std::string()) << ','
            << format_number(c.max_c_drift) << ','
            << (c.curvature_nonzero ? (*c.curvature_nonzero ? "true" : "false") : "") << ',';
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << err << '\n';
    }
}

} // namespace painleve
