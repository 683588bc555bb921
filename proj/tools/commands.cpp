#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "choquard/diagnostics.hpp"
#include "choquard/field_io.hpp"
#include "choquard/functionals.hpp"
#include "csv.hpp"

namespace choquard::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Logger {
public:
    explicit Logger(bool quiet) : quiet_(quiet) {}
    template <class... Args>
    void operator()(fmt::format_string<Args...> f, Args&&... args) const {
        if (quiet_) return;
        fmt::print(stderr, f, std::forward<Args>(args)...);
        fmt::print(stderr, "\n");
    }

private:
    bool quiet_;
};

void dump(const fs::path& path, const ScalarField& u) {
    try {
        write_field(path, u);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
}

DecayFit safe_decay_fit(const ScalarField& u, const std::vector<Vec3>& centers) {
    try {
        return decay_fit(u, centers);
    } catch (const std::invalid_argument&) {
        DecayFit f;
        f.rate = f.prefactor = kNaN;
        return f;
    }
}

int not_converged(const std::string& what) {
    fmt::print(stderr, "error: {}\n", what);
    return kNotConverged;
}

void write_residuals(const fs::path& path, const std::vector<double>& history) {
    CsvWriter csv(path, {"iteration", "grad_resid"});
    for (std::size_t i = 0; i < history.size(); ++i) csv.row(i, history[i]);
    csv.close();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// The cutoff balls around the well centers must fit in the rescaled box.
void check_box(const RunConfig& cfg, const PotentialSpec& pot, double eps) {
    const double beta = cfg.ansatz.beta_fraction * ansatz_delta(pot, cfg.ansatz.delta_fraction);
    double reach = 0.0;
    for (const Well& w : pot.wells())
        for (double c : w.center) reach = std::max(reach, std::abs(c) + 2.0 * beta);
    if (reach / eps > cfg.grid.L)
        throw ConfigError(fmt::format("grid.L: expected L >= {:.4g} for epsilon = {} (the cutoff balls leave the box)",
                                      reach / eps, eps));
}

void check_sweep_box(const RunConfig& cfg, const PotentialSpec& pot) {
    AnsatzSpec skeleton;
    for (const Well& w : pot.wells()) skeleton.anchors.push_back(w.center);
    const double need = sweep_min_half_length(skeleton, cfg.run.eps_list.back());
    if (cfg.grid.L < need)
        throw ConfigError(fmt::format("grid.L: expected L >= 2 max|x_i| / eps_min + 10 = {:.4g} for the sweep", need));
}

std::vector<std::string> concentration_header() {
    return {"epsilon", "well", "peak_x", "peak_y", "peak_z", "dist_to_M", "gamma",
            "Q", "grad_resid", "decay_rate", "profile_L2_dist"};
}

void write_row(CsvWriter& csv, const ConcentrationRow& r) {
    csv.row(r.epsilon, r.well, r.peak[0], r.peak[1], r.peak[2], r.dist_to_M, r.gamma, r.Q, r.grad_resid,
            r.decay_rate, r.profile_L2_dist);
}

int cmd_limit(const RunContext& ctx, const Logger& log) {
    const RunConfig& c = ctx.config;
    const Nonlinearity nl = make_nonlinearity(c);
    const RieszOperator riesz = make_riesz(c);
    log("limit: a = {}, {} on n = {}, L = {}", c.run.a, c.solver.method, c.grid.n, c.grid.L);
    const GroundState gs = solve_ground_state(c.run.a, nl, riesz, limit_options(c));
    log("limit: E = {:.10g}, pohozaev {:.3e}, grad {:.3e}, {} iterations", gs.energy, gs.pohozaev_resid,
        gs.grad_resid, gs.iterations);
    dump(ctx.out / "ground_state.chq", gs.U);
    const DecayFit decay = safe_decay_fit(gs.U, {{0.0, 0.0, 0.0}});
    const SymmetryReport sym = symmetry_report(gs.U);
    const DilationProfile dp = dilation_profile(gs.U, c.run.a, nl, riesz, t_values(c.run.t_grid));

    CsvWriter csv(ctx.out / "limit.csv",
                  {"a", "energy", "pohozaev_resid", "grad_resid", "decay_rate", "decay_prefactor",
                   "symmetry_deviation", "monotonicity_violations", "dilation_argmax_t", "kinetic", "mass",
                   "nonlocal", "method", "iterations", "converged"});
    csv.row(gs.a, gs.energy, gs.pohozaev_resid, gs.grad_resid, decay.rate, decay.prefactor, sym.max_deviation,
            sym.monotonicity_violations, dp.argmax_t, gs.terms.A, gs.terms.B, gs.terms.C, to_string(gs.method),
            gs.iterations, gs.converged);
    csv.close();

    CsvWriter dil(ctx.out / "dilation.csv", {"t", "energy", "predicted", "resampled"});
    for (std::size_t i = 0; i < dp.t.size(); ++i) dil.row(dp.t[i], dp.energy[i], dp.predicted[i], dp.resampled[i]);
    dil.close();
    write_residuals(ctx.out / "residuals.csv", gs.residual_history);
    if (!gs.converged)
        return not_converged(fmt::format("ground state not converged after {} iterations (grad {:.3e}, pohozaev {:.3e})",
                                         gs.iterations, gs.grad_resid, gs.pohozaev_resid));
    return kOk;
}

int cmd_curve(const RunContext& ctx, const Logger& log) {
    const RunConfig& c = ctx.config;
    const Nonlinearity nl = make_nonlinearity(c);
    const RieszOperator riesz = make_riesz(c);
    log("curve: {} values of a on n = {}, L = {}", c.run.a_list.size(), c.grid.n, c.grid.L);
    const std::vector<CurvePoint> pts = energy_curve(c.run.a_list, nl, riesz, limit_options(c));

    CsvWriter csv(ctx.out / "curve.csv", {"a", "energy", "converged"});
    bool all = true, monotone = true;
    std::vector<double> la, le;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        csv.row(pts[i].a, pts[i].energy, pts[i].converged);
        all = all && pts[i].converged;
        if (i > 0) monotone = monotone && pts[i].energy > pts[i - 1].energy;
        la.push_back(std::log(pts[i].a));
        le.push_back(std::log(pts[i].energy));
    }
    csv.close();

    const double fitted = pts.size() >= 2 ? slope(la, le) : kNaN;
    const double oracle = c.model.nonlinearity.name == "power" ? power_energy_exponent(nl.exponent(), c.model.alpha)
                                                               : kNaN;
    CsvWriter sum(ctx.out / "curve_summary.csv", {"points", "monotone", "fitted_slope", "oracle_exponent", "rel_err"});
    sum.row(pts.size(), monotone, fitted, oracle, std::abs(fitted / oracle - 1.0));
    sum.close();
    log("curve: slope {:.6g} against {:.6g}", fitted, oracle);
    return all ? kOk : not_converged("energy curve: some values of a did not converge");
}

int cmd_semiclassical(const RunContext& ctx, const Logger& log) {
    const RunConfig& c = ctx.config;
    const Nonlinearity nl = make_nonlinearity(c);
    const PotentialSpec pot = make_potential(c);
    const double eps = c.run.epsilon;
    check_box(c, pot, eps);
    const RieszOperator riesz = make_riesz(c);
    log("semiclassical: building ansatz profiles for {} wells", pot.size());
    const AnsatzSpec ansatz = make_ansatz(pot, nl, riesz, ansatz_options(c));
    const PenalizationSpec pen{eps, c.mu, 1.0};
    const std::vector<PathProfile> paths = path_profiles(ansatz, pot, pen, nl, riesz, t_values(c.run.t_grid));
    PenalizedSolverOptions so = penalized_options(c);
    so.energy_cap = 2.0 * paths.front().D;
    log("semiclassical: epsilon = {}, D = {:.6g}", eps, paths.front().D);
    const ScalarField guess = build_initial_guess(ansatz, pot, pen);
    const SemiclassicalSolution s = solve_penalized(guess, pot, pen, nl, riesz, so);
    log("semiclassical: gamma = {:.8g}, Q = {:.3e}, grad {:.3e}, {}", s.gamma_energy, s.q_value, s.grad_resid,
        s.converged ? "converged" : "not converged");
    dump(ctx.out / "solution.chq", s.u);

    CsvWriter rows(ctx.out / "concentration.csv", concentration_header());
    for (std::size_t i = 0; i < pot.size(); ++i) {
        ConcentrationRow r;
        r.epsilon = eps;
        r.well = static_cast<int>(i);
        r.peak = s.peaks[i];
        r.dist_to_M = s.dist_to_M[i];
        r.gamma = s.gamma_energy;
        r.Q = s.q_value;
        r.grad_resid = s.grad_resid;
        r.decay_rate = s.decay_rate_original;
        r.profile_L2_dist = profile_distance(s.u, ansatz.profiles[i].U, s.peaks, static_cast<int>(i), eps);
        write_row(rows, r);
    }
    rows.close();

    CsvWriter sum(ctx.out / "semiclassical.csv",
                  {"epsilon", "gamma", "Q", "grad_resid", "converged", "iterations", "fallback_steps", "D", "E",
                   "E_tilde", "ansatz_distance", "within_d", "mass_outside", "negative_part", "raw_peak_count",
                   "peak_count_ok", "decay_rate_rescaled", "decay_rate_original"});
    sum.row(eps, s.gamma_energy, s.q_value, s.grad_resid, s.converged, s.iterations, s.fallback_steps,
            paths.front().D, paths.front().E, paths.front().E_tilde, s.ansatz_distance, s.within_d, s.mass_outside,
            s.negative_part, s.raw_peak_count, s.peak_count_ok, s.decay.rate, s.decay_rate_original);
    sum.close();
    write_residuals(ctx.out / "residuals.csv", s.residual_history);
    return s.converged ? kOk : not_converged(fmt::format("penalized solve not converged (grad {:.3e})", s.grad_resid));
}

int cmd_sweep(const RunContext& ctx, const Logger& log) {
    const RunConfig& c = ctx.config;
    const Nonlinearity nl = make_nonlinearity(c);
    const PotentialSpec pot = make_potential(c);
    check_sweep_box(c, pot);
    const RieszOperator riesz = make_riesz(c);
    log("sweep: building ansatz profiles for {} wells", pot.size());
    const AnsatzSpec ansatz = make_ansatz(pot, nl, riesz, ansatz_options(c));
    SweepOptions so;
    so.solver = penalized_options(c);
    so.path_t_grid = t_values(c.run.t_grid);
    log("sweep: {} values of epsilon on n = {}, L = {}", c.run.eps_list.size(), c.grid.n, c.grid.L);
    const ConcentrationReport rep = sweep_epsilon(c.run.eps_list, ansatz, pot, {c.run.eps_list.front(), c.mu, 1.0},
                                                  nl, riesz, so);

    CsvWriter rows(ctx.out / "concentration.csv", concentration_header());
    for (const ConcentrationRow& r : rep.rows) write_row(rows, r);
    rows.close();

    CsvWriter ent(ctx.out / "sweep.csv",
                  {"epsilon", "ok", "error", "D", "gamma", "Q", "grad_resid", "iterations", "fallback_steps",
                   "ansatz_distance", "within_d", "mass_outside", "negative_part", "raw_peak_count", "peak_count_ok",
                   "decay_rate_original"});
    bool all = true;
    for (std::size_t k = 0; k < rep.entries.size(); ++k) {
        const SweepEntry& e = rep.entries[k];
        const SemiclassicalSolution& s = e.solution;
        ent.row(e.epsilon, e.ok, e.error, e.D, s.gamma_energy, s.q_value, s.grad_resid, s.iterations,
                s.fallback_steps, s.ansatz_distance, s.within_d, s.mass_outside, s.negative_part, s.raw_peak_count,
                s.peak_count_ok, s.decay_rate_original);
        all = all && e.ok;
        if (s.u.size() > 0) dump(ctx.out / fmt::format("solution_{}.chq", k), s.u);
        log("sweep: epsilon = {}: {}", e.epsilon, e.ok ? "converged" : e.error);
    }
    ent.close();

    CsvWriter sum(ctx.out / "sweep_summary.csv", {"E", "E_tilde", "D", "mu", "mass_outside_slope"});
    sum.row(rep.E, rep.E_tilde, rep.D, rep.mu, rep.mass_outside_slope);
    sum.close();
    return all ? kOk : not_converged("sweep: some values of epsilon failed (see sweep.csv)");
}

int cmd_path_profile(const RunContext& ctx, const Logger& log) {
    const RunConfig& c = ctx.config;
    const Nonlinearity nl = make_nonlinearity(c);
    const PotentialSpec pot = make_potential(c);
    const RieszOperator riesz = make_riesz(c);
    log("path-profile: building ansatz profiles for {} wells", pot.size());
    const AnsatzSpec ansatz = make_ansatz(pot, nl, riesz, ansatz_options(c));
    const PenalizationSpec pen{c.run.epsilon, c.mu, 1.0};
    const std::vector<double> t = t_values(c.run.t_grid);
    const std::vector<PathProfile> paths =
        c.run.well < 0 ? path_profiles(ansatz, pot, pen, nl, riesz, t)
                       : std::vector<PathProfile>{path_profile(ansatz, pot, pen, nl, riesz, c.run.well, t)};

    CsvWriter csv(ctx.out / "path_profile.csv", {"well", "t", "gamma"});
    for (const PathProfile& p : paths)
        for (std::size_t i = 0; i < p.t.size(); ++i) csv.row(p.well, p.t[i], p.gamma[i]);
    csv.close();
    CsvWriter sum(ctx.out / "path_summary.csv", {"well", "epsilon", "T", "C", "argmax_t", "D", "E", "E_tilde"});
    for (const PathProfile& p : paths) sum.row(p.well, p.epsilon, p.T, p.C, p.argmax_t, p.D, p.E, p.E_tilde);
    sum.close();
    for (const PathProfile& p : paths) log("path-profile: well {}: C = {:.6g} at t = {}, T = {}", p.well, p.C, p.argmax_t, p.T);
    return kOk;
}

int cmd_verify(const RunContext& ctx, const Logger& log) {
    const std::vector<VerifyRow> rows = verify_suite(ctx.config, ctx.quiet);
    CsvWriter csv(ctx.out / "verify.csv", {"check", "measured", "threshold", "status"});
    int failed = 0;
    for (const VerifyRow& r : rows) {
        csv.row(r.check, r.measured, r.threshold, r.pass() ? "pass" : "fail");
        failed += r.pass() ? 0 : 1;
    }
    csv.close();
    log("verify: {} of {} checks pass", rows.size() - failed, rows.size());
    return failed == 0 ? kOk : not_converged(fmt::format("verify: {} checks fail (see verify.csv)", failed));
}

void write_manifest(const RunContext& ctx) {
    const fs::path path = ctx.out / "manifest.json";
    std::ofstream out(path);
    out << manifest(ctx).dump(2) << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"limit", "curve", "semiclassical", "sweep", "path-profile", "verify"};
    return names;
}

nlohmann::json manifest(const RunContext& ctx) {
    nlohmann::json j = to_json(ctx.config);
    j["manifest"] = {{"tool", "choquard"}, {"version", kToolVersion}, {"command", ctx.command}};
    return j;
}

int run(const RunContext& ctx) {
    const Logger log(ctx.quiet);
    try {
        std::error_code ec;
        fs::create_directories(ctx.out, ec);
        if (ec) throw IoError("cannot create output directory " + ctx.out.string() + ": " + ec.message());
        write_manifest(ctx);
        if (ctx.command == "limit") return cmd_limit(ctx, log);
        if (ctx.command == "curve") return cmd_curve(ctx, log);
        if (ctx.command == "semiclassical") return cmd_semiclassical(ctx, log);
        if (ctx.command == "sweep") return cmd_sweep(ctx, log);
        if (ctx.command == "path-profile") return cmd_path_profile(ctx, log);
        if (ctx.command == "verify") return cmd_verify(ctx, log);
        throw ConfigError("unknown command '" + ctx.command + "'");
    } catch (const IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIo;
    } catch (const ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kValidation;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kNotConverged;
    }
}

}  // namespace choquard::cli
