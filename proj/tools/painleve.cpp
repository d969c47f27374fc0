// painleve: integrate PIV and its relatives, scan zeros, run property suites
// and parameter sweeps.
//
// The beta parameter follows Ince's XXXI form of PIV, where it enters as
// beta^2. There is no conversion to the -2 beta labelling.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "painleve/painleve.hpp"

namespace {

using namespace painleve;
using cplx = std::complex<double>;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnderflow = 2;
constexpr int kExitVerifyFailed = 3;

/// A rejected run specification; `field` names the offending flag.
class SpecError : public std::runtime_error {
public:
    SpecError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct Flags {
    std::string eq;
    double alpha = 0.0;
    double beta = 0.0;
    double z0 = 0.0, z0_im = 0.0;
    double w0 = 0.0, w0_im = 0.0;
    double w1 = 0.0, w1_im = 0.0;
    double w2 = 0.0, w2_im = 0.0;
    std::string zero_branch;
    double span = 0.0;
    Tolerances tol;
    std::string field = "real";
    double dir_re = 1.0;
    double dir_im = 0.0;
    std::string out;
    std::string summary;

    CLI::Option* w0_opt = nullptr;
    CLI::Option* w1_opt = nullptr;
    CLI::Option* w2_opt = nullptr;
    CLI::Option* branch_opt = nullptr;
    std::vector<CLI::Option*> imag_opts;
};

template <Scalar T>
struct RunSpec {
    EquationKind kind = EquationKind::PIV;
    Params params;
    InitialData<T> id;
    double span = 0.0;
    Tolerances tol;
};

void add_run_flags(CLI::App& cmd, Flags& f, bool with_output) {
    cmd.add_option("--eq", f.eq, "piv|piv0|xvii|xxix|xxxii|sqrt-piv0")->required();
    cmd.add_option("--alpha", f.alpha, "PIV alpha");
    cmd.add_option("--beta", f.beta, "PIV beta (enters as beta^2, Ince XXXI convention)");
    cmd.add_option("--z0", f.z0, "starting point (real part)");
    f.w0_opt = cmd.add_option("--w0", f.w0, "w(z0)");
    f.w1_opt = cmd.add_option("--w1", f.w1, "w'(z0)");
    f.w2_opt = cmd.add_option("--w2", f.w2, "w''(z0); with --w0/--w1 gives raw third-order data");
    f.imag_opts = {cmd.add_option("--z0-im", f.z0_im, "imaginary part of z0 (complex field)"),
                   cmd.add_option("--w0-im", f.w0_im, "imaginary part of w0 (complex field)"),
                   cmd.add_option("--w1-im", f.w1_im, "imaginary part of w1 (complex field)"),
                   cmd.add_option("--w2-im", f.w2_im, "imaginary part of w2 (complex field)")};
    f.branch_opt = cmd.add_option("--zero-branch", f.zero_branch, "start at a zero with w' = +beta or -beta")
                       ->check(CLI::IsMember({"plus", "minus"}));
    cmd.add_option("--span", f.span, "path length")->required();
    cmd.add_option("--rel", f.tol.rel, "relative tolerance");
    cmd.add_option("--abs", f.tol.abs, "absolute tolerance");
    cmd.add_option("--h-init", f.tol.h_init, "initial step");
    cmd.add_option("--h-min", f.tol.h_min, "minimum step");
    cmd.add_option("--pole-cutoff", f.tol.pole_cutoff, "|w| beyond which the run stops at a pole");
    cmd.add_option("--field", f.field, "real|complex")->check(CLI::IsMember({"real", "complex"}));
    cmd.add_option("--dir-re", f.dir_re, "path direction, real part");
    cmd.add_option("--dir-im", f.dir_im, "path direction, imaginary part");
    if (with_output) {
        cmd.add_option("--out", f.out, "output file (default: standard output)");
        cmd.add_option("--summary", f.summary, "run summary JSON file");
    }
}

EquationKind parse_eq(const std::string& name) {
    const auto kind = parse_kind(name);
    if (!kind) {
        throw SpecError("--eq", "unknown equation '" + name + "'");
    }
    return *kind;
}

template <Scalar T>
T make_scalar(double re, double im) {
    if constexpr (is_complex_v<T>) {
        return {re, im};
    } else {
        return re;
    }
}

/// Validates every flag and completes the initial data, so that no
/// computation starts from an inconsistent spec.
template <Scalar T>
RunSpec<T> build_spec(const Flags& f) {
    RunSpec<T> spec;
    spec.kind = parse_eq(f.eq);
    try {
        spec.params = Params{f.alpha, f.beta};
        validate(spec.kind, spec.params);
    } catch (const Error& e) {
        throw SpecError("--alpha/--beta", e.what());
    }
    if (!is_complex_v<T>) {
        for (const auto* opt : f.imag_opts) {
            if (opt->count() > 0) {
                throw SpecError(opt->get_name(), "complex initial data needs --field complex");
            }
        }
        if (f.dir_im != 0.0) {
            throw SpecError("--dir-im", "real field integrates along the real axis");
        }
    }
    if (spec.kind == EquationKind::SQRT_PIV0 && is_complex_v<T>) {
        throw SpecError("--field", "sqrt-piv0 is defined on real intervals only");
    }
    if (!(f.span > 0.0) || !std::isfinite(f.span)) {
        throw SpecError("--span", "must be positive and finite");
    }
    spec.span = f.span;
    try {
        f.tol.validate();
    } catch (const Error& e) {
        throw SpecError("--rel/--abs/--h-init/--h-min/--pole-cutoff", e.what());
    }
    spec.tol = f.tol;

    spec.id.z0 = make_scalar<T>(f.z0, f.z0_im);
    spec.id.direction = make_scalar<T>(f.dir_re, f.dir_im);
    if (f.branch_opt->count() > 0) {
        if (f.w0_opt->count() > 0 || f.w1_opt->count() > 0) {
            throw SpecError("--zero-branch", "a zero seed fixes w0 = 0 and w1 = +/-beta; drop --w0/--w1");
        }
        spec.id.seed = ZeroSeed<T>{f.zero_branch == "plus" ? ZeroSign::PLUS : ZeroSign::MINUS,
                                   make_scalar<T>(f.w2, f.w2_im)};
    } else if (f.w2_opt->count() > 0) {
        spec.id.seed = RawSeed<T>{make_scalar<T>(f.w0, f.w0_im), make_scalar<T>(f.w1, f.w1_im),
                                  make_scalar<T>(f.w2, f.w2_im)};
    } else {
        if (f.w0_opt->count() == 0) {
            throw SpecError("--w0", "required (or give --zero-branch, or --w2 for raw data)");
        }
        spec.id.seed = NonzeroSeed<T>{make_scalar<T>(f.w0, f.w0_im), make_scalar<T>(f.w1, f.w1_im)};
    }
    try {
        detail::validate_direction(spec.id.direction);
    } catch (const Error& e) {
        throw SpecError("--dir-re/--dir-im", e.what());
    }
    try {
        (void)complete_initial_data(spec.kind, spec.params, spec.id);
    } catch (const Error& e) {
        throw SpecError("--w0/--w1/--w2/--zero-branch", e.what());
    }
    return spec;
}

/// Opens `path` for writing, or returns standard output for an empty path.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw SpecError("--out", "cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    Output out(path);
    out.stream() << j.dump(2) << '\n';
}

template <Scalar T>
int cmd_integrate(const Flags& f) {
    const auto spec = build_spec<T>(f);
    spdlog::info("integrating {} over span {}", f.eq, spec.span);
    const auto traj = integrate(spec.kind, spec.params, spec.id, spec.span, spec.tol);
    const auto events = locate_zeros(traj);
    {
        Output out(f.out);
        write_trajectory_csv(out.stream(), traj);
    }
    const auto summary = summary_json(traj, events);
    if (!f.summary.empty()) {
        write_json(f.summary, summary);
    } else if (!f.out.empty()) {
        std::cout << summary.dump(2) << '\n';
    }
    spdlog::info("status {} after {} nodes", to_string(traj.status), traj.nodes.size());
    return traj.status == Status::STEP_UNDERFLOW ? kExitUnderflow : kExitOk;
}

int cmd_zeros(const Flags& f) {
    if (f.field != "real") {
        throw SpecError("--field", "zero scans run in the real field");
    }
    const auto spec = build_spec<double>(f);
    const auto traj = integrate(spec.kind, spec.params, spec.id, spec.span, spec.tol);
    const auto events = locate_zeros(traj);
    auto j = summary_json(traj, events);
    const bool identically_zero = trajectory_stats(traj).max_abs_w == 0.0;
    j["identically_zero"] = identically_zero;
    if (identically_zero) {
        spdlog::warn("identically zero trajectory: no isolated zeros to report");
        j["warning"] = "identically zero";
    }
    if (is_piv_family(spec.kind) && spec.params.beta() == 0.0 && !identically_zero) {
        const auto report = check_curvature_theorem(events, traj);
        auto violations = nlohmann::ordered_json::array();
        for (const auto& v : report.violations) {
            violations.push_back({{"index", v.index},
                                  {"a", v.a},
                                  {"slope", v.slope},
                                  {"curvature", v.curvature},
                                  {"reason", v.reason}});
        }
        j["curvature_report"] = {{"checked", report.checked},
                                 {"vacuous", report.vacuous()},
                                 {"ok", report.ok()},
                                 {"violations", violations},
                                 {"clustered", report.clustered}};
        if (!report.ok()) {
            spdlog::warn("{} zero(s) with vanishing curvature or nonzero slope", report.violations.size());
        }
    }
    if (!f.summary.empty()) {
        write_json(f.summary, summary_json(traj, events));
    }
    write_json(f.out, j);
    return traj.status == Status::STEP_UNDERFLOW ? kExitUnderflow : kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::optional<std::size_t> count) {
    std::vector<std::string_view> suites;
    if (suite == "all") {
        suites.assign(kSuites.begin(), kSuites.end());
    } else {
        suites.push_back(suite);
    }
    bool all_passed = true;
    for (const auto name : suites) {
        const auto report = run_suite(name, seed, count.value_or(default_count(name)));
        for (const auto& p : report.properties) {
            std::cout << (p.passed ? "PASS" : "FAIL") << "  [" << report.suite << "] " << p.name
                      << "  worst=" << format_number(p.worst) << " threshold=" << format_number(p.threshold);
            if (!p.detail.empty()) {
                std::cout << "  (" << p.detail << ')';
            }
            std::cout << '\n';
        }
        all_passed = all_passed && report.passed();
    }
    return all_passed ? kExitOk : kExitVerifyFailed;
}

int cmd_sweep(const Flags& f, const SweepGrid& grid, unsigned threads) {
    if (grid.size() == 0) {
        throw SpecError("--alpha-n/--beta-n", "the sweep grid is empty");
    }
    if (grid.size() > kMaxSweepCells) {
        throw SpecError("--alpha-n/--beta-n", "the sweep grid exceeds 1e6 cells");
    }
    if (f.field != "real") {
        throw SpecError("--field", "sweeps run in the real field");
    }
    // Each cell gets its own params; the seed flags are validated at grid corners.
    Flags corner = f;
    corner.alpha = grid.alpha.min;
    corner.beta = grid.beta.min;
    const auto spec = build_spec<double>(corner);
    if (spec.kind != EquationKind::PIV) {
        throw SpecError("--eq", "sweeps run over (alpha, beta) and need piv");
    }
    const auto cells = run_sweep(spec.kind, grid, spec.id, spec.span, spec.tol, threads);
    Output out(f.out);
    write_sweep_csv(out.stream(), cells);
    const auto failed = std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.failed; });
    if (failed > 0) {
        spdlog::warn("{} of {} sweep cells failed", failed, cells.size());
    }
    return static_cast<std::size_t>(failed) == cells.size() ? kExitUnderflow : kExitOk;
}

void configure_logging() {
    auto logger = spdlog::stderr_logger_mt("painleve");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("painleve: %l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("PAINLEVE_LOG")) {
        const std::string level = env;
        if (level == "error") {
            spdlog::set_level(spdlog::level::err);
        } else if (level == "warn") {
            spdlog::set_level(spdlog::level::warn);
        } else if (level == "info") {
            spdlog::set_level(spdlog::level::info);
        } else if (level == "debug") {
            spdlog::set_level(spdlog::level::debug);
        } else {
            spdlog::warn("ignoring PAINLEVE_LOG={} (expected error|warn|info|debug)", level);
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Integrate Painleve IV through its third-order form and verify closed-form relatives"};
    app.require_subcommand(1);

    Flags integrate_flags;
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate one trajectory, write CSV and a JSON summary");
    add_run_flags(*integrate_cmd, integrate_flags, true);

    Flags zeros_flags;
    auto* zeros_cmd = app.add_subcommand("zeros", "integrate and report the zeros of w as JSON");
    add_run_flags(*zeros_cmd, zeros_flags, true);

    std::string suite;
    std::uint64_t seed = 1;
    std::size_t count = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run a randomized property suite");
    verify_cmd->add_option("--suite", suite, "identities|constraint|closed-forms|xxix-integrals|sqrt|all")
        ->required()
        ->check(CLI::IsMember({"identities", "constraint", "closed-forms", "xxix-integrals", "sqrt", "all"}));
    verify_cmd->add_option("--seed", seed, "random seed");
    auto* count_opt = verify_cmd->add_option("--count", count, "number of random instances");

    Flags sweep_flags;
    SweepGrid grid;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep_cmd = app.add_subcommand("sweep", "integrate over an (alpha, beta) grid, one summary row per cell");
    add_run_flags(*sweep_cmd, sweep_flags, true);
    sweep_cmd->add_option("--alpha-min", grid.alpha.min, "first alpha");
    sweep_cmd->add_option("--alpha-max", grid.alpha.max, "last alpha");
    sweep_cmd->add_option("--alpha-n", grid.alpha.count, "number of alpha values")->required();
    sweep_cmd->add_option("--beta-min", grid.beta.min, "first beta");
    sweep_cmd->add_option("--beta-max", grid.beta.max, "last beta");
    sweep_cmd->add_option("--beta-n", grid.beta.count, "number of beta values")->required();
    sweep_cmd->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (integrate_cmd->parsed()) {
            return integrate_flags.field == "complex" ? cmd_integrate<cplx>(integrate_flags)
                                                     : cmd_integrate<double>(integrate_flags);
        }
        if (zeros_cmd->parsed()) {
            return cmd_zeros(zeros_flags);
        }
        if (verify_cmd->parsed()) {
            std::optional<std::size_t> n;
            if (count_opt->count() > 0) {
                n = count;
            }
            return cmd_verify(suite, seed, n);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_flags, grid, threads);
        }
    } catch (const SpecError& e) {
        std::cerr << "painleve: invalid run spec: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        std::cerr << "painleve: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
