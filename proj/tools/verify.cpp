#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "choquard/diagnostics.hpp"
#include "choquard/functionals.hpp"
#include "choquard/spectral.hpp"
#include "commands.hpp"

namespace choquard::cli {

namespace {

using std::numbers::pi;

ScalarField random_bumps(const GridSpec& g, std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> pos(-0.3 * g.half_length(), 0.3 * g.half_length());
    std::uniform_real_distribution<double> amp(0.2, 2.0);
    std::uniform_real_distribution<double> width(0.8, 1.6);
    ScalarField u(g);
    for (int b = 0; b < count; ++b) {
        const Vec3 c{pos(rng), pos(rng), pos(rng)};
        const double a = amp(rng), w = width(rng);
        u += ScalarField::from_function(g, [&](const Vec3& x) {
            const double d = distance(x, c);
            return a * std::exp(-d * d / (w * w));
        });
    }
    return u;
}

ScalarField unit_direction(const GridSpec& g, std::mt19937_64& rng) {
    ScalarField phi = random_bumps(g, rng, 2);
    phi.axpy(-0.7, random_bumps(g, rng, 1));
    phi *= 1.0 / l2_norm(phi);
    return phi;
}

// worst |fd - <grad, phi>| / |<grad, phi>| over random unit directions
template <class Energy>
double fd_error(const Energy& energy, const ScalarField& u, const ScalarField& grad, std::mt19937_64& rng,
                int directions) {
    double worst = 0.0;
    for (int d = 0; d < directions; ++d) {
        const ScalarField phi = unit_direction(u.grid(), rng);
        ScalarField up = u, um = u;
        up.axpy(1e-5, phi);
        um.axpy(-1e-5, phi);
        const double fd = (energy(up) - energy(um)) / 2e-5;
        const double an = inner(grad, phi);
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
    return worst;
}

double riesz_gaussian_error() {
    const GridSpec g = make_grid(64, 16.0);
    const RieszOperator op(g, 2.0);
    const auto rho = ScalarField::from_function(g, [](const Vec3& x) {
        return std::pow(2 * pi, -1.5) * std::exp(-0.5 * norm(x) * norm(x));
    });
    const ScalarField v = op.convolve(rho);
    double worst = 0.0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                const double r = norm(g.node(i, j, k));
                if (r > 8.0) continue;
                const double exact = r > 0 ? std::erf(r / std::sqrt(2.0)) / (4 * pi * r) : std::sqrt(2.0 / pi) / (4 * pi);
                worst = std::max(worst, std::abs(v.at(i, j, k) - exact) / exact);
            }
    return worst;
}

}  // namespace

std::vector<VerifyRow> verify_suite(const RunConfig& cfg, bool quiet) {
    std::vector<VerifyRow> rows;
    auto add = [&](std::string name, double measured, double threshold, bool upper = true) {
        rows.push_back({std::move(name), measured, threshold, upper});
        if (!quiet)
            fmt::print(stderr, "verify: {:<32} {:<12.6g} {}\n", rows.back().check, measured,
                       rows.back().pass() ? "pass" : "fail");
    };
    std::mt19937_64 rng(cfg.solver.seed);
    const double alpha = cfg.model.alpha;
    const Nonlinearity nl = make_nonlinearity(cfg);
    const PotentialSpec pot = make_potential(cfg);

    add("riesz_gaussian_max_rel_err", riesz_gaussian_error(), 1e-2);
    {
        const GridSpec g = make_grid(32, 8.0);
        const ScalarField f = random_bumps(g, rng, 3);
        add("spectral_round_trip_rel_err", l2_norm(spectral_round_trip(f) - f) / l2_norm(f), 1e-12);
        add("helmholtz_inverse_rel_err", l2_norm(apply_helmholtz(helmholtz_inverse(f, 1.0), 1.0) - f) / l2_norm(f),
            1e-10);
    }
    {
        const GridSpec g = make_grid(32, 10.0);
        const RieszOperator op(g, alpha);
        const ScalarField f = random_bumps(g, rng, 2), h = random_bumps(g, rng, 2);
        const double lhs = inner(op.convolve(f), h), rhs = inner(f, op.convolve(h));
        add("riesz_self_adjoint_rel_err", std::abs(lhs - rhs) / std::abs(lhs), 1e-10);
        add("riesz_positivity_min", op.convolve(f).min_value() / f.max_abs(), -1e-8, false);
    }
    add("nonlinearity_hypotheses", check_hypotheses(nl, alpha).ok() ? 1.0 : 0.0, 1.0, false);
    add("potential_hypotheses", check_potential(pot).ok() ? 1.0 : 0.0, 1.0, false);
    {
        const GridSpec g = make_grid(32, 8.0);
        const RieszOperator riesz(g, alpha);
        const ScalarField u = random_bumps(g, rng, 3);
        const double a = cfg.run.a;
        add("grad_fd_limit_rel_err",
            fd_error([&](const ScalarField& w) { return energy_limit(w, a, nl, riesz); }, u,
                     grad_limit(u, a, nl, riesz), rng, 10),
            1e-5);
        const PenalizationSpec pen{0.5, cfg.mu, 1.0};
        const PenalizedFunctional fn(g, pot, pen, nl, riesz);
        ScalarField v = random_bumps(g, rng, 3);
        v *= 2.8;
        add("penalty_active", fn.energy(v).penalty, 0.0, false);
        add("grad_fd_penalized_rel_err",
            fd_error([&](const ScalarField& w) { return fn.energy(w).total; }, v, fn.gradient(v), rng, 10), 1e-5);
    }
    {
        const double closed = std::sqrt((3.0 + std::sqrt(29.0)) / 10.0);
        add("pohozaev_root_abs_err", std::abs(pohozaev_root(1.0, 1.0, 1.0, 1.0, 2.0) - closed), 1e-12);
        add("dilation_g_abs_err",
            std::max(std::abs(dilation_g1(1.0, 2.0) - 0.4), std::abs(dilation_g2(1.0, 2.0) - 0.2)), 1e-15);
        add("hls_constant_abs_err", std::abs(hls_constant_bound(1.2, 1.2, 2.0) - 4.231), 1e-3);
    }
    {
        const GridSpec g = make_grid(32, 8.0);
        std::uniform_real_distribution<double> uu(0.05, 0.95);
        const RieszOperator op(g, alpha);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const double inv_s = alpha / 3.0 + uu(rng) * (1.0 - alpha / 3.0);
            const double r = 1.0 / (1.0 + alpha / 3.0 - inv_s);
            const ScalarField f = random_bumps(g, rng, 1 + trial % 3), h = random_bumps(g, rng, 1 + (trial / 3) % 3);
            const HlsCheck c = hls_check(f, h, 1.0 / inv_s, r, op);
            worst = std::max(worst, c.lhs / c.bound);
        }
        add("hls_max_lhs_over_bound", worst, 1.0);
    }
    {
        const GridSpec g = make_grid(64, 16.0);
        const auto expo = ScalarField::from_function(g, [](const Vec3& x) { return std::exp(-norm(x)); });
        add("decay_fit_rate_abs_err", std::abs(decay_fit(expo, {{0.0, 0.0, 0.0}}).rate - 1.0), 2e-2);
    }

    const RieszOperator riesz = make_riesz(cfg);
    const double a = cfg.run.a;
    LimitSolverOptions opts = limit_options(cfg);
    const GroundState gs = solve_ground_state(a, nl, riesz, opts);
    add("gs_converged", gs.converged ? 1.0 : 0.0, 1.0, false);
    add("gs_pohozaev_resid", gs.pohozaev_resid, 1e-3);
    const double identity = (2.0 + alpha) / (2.0 * (3.0 + alpha)) * gs.terms.A +
                            alpha * a / (2.0 * (3.0 + alpha)) * gs.terms.B;
    add("gs_energy_identity_rel_err", std::abs(identity / gs.energy - 1.0), 1e-3);
    const SymmetryReport sym = symmetry_report(gs.U);
    add("gs_symmetry_deviation", sym.max_deviation, 1e-2);
    add("gs_monotonicity_violations", sym.monotonicity_violations, 0.0);
    opts.method = opts.method == SolverMethod::source_iteration ? SolverMethod::sobolev_flow
                                                                : SolverMethod::source_iteration;
    const GroundState other = solve_ground_state(a, nl, riesz, opts);
    add("gs_methods_l2_rel_diff", l2_norm(gs.U - other.U) / l2_norm(gs.U), 1e-2);
    std::vector<double> t;
    for (int k = 1; k <= 100; ++k) t.push_back(0.02 * k);
    add("dilation_argmax_abs_err", std::abs(dilation_profile(gs.U, a, nl, riesz, t).argmax_t - 1.0), 0.02);
    double decay = std::numeric_limits<double>::quiet_NaN();
    try {
        decay = decay_fit(gs.U, {{0.0, 0.0, 0.0}}).rate;
    } catch (const std::invalid_argument&) {
    }
    add("gs_decay_rate", decay, 0.0, false);
    return rows;
}

}  // namespace choquard::cli
