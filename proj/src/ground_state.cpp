#include "choquard/ground_state.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "choquard/diagnostics.hpp"
#include "choquard/spectral.hpp"

namespace choquard {

double pohozaev_root(double A, double B, double C, double a, double alpha) {
    if (!(C > 0.0))
        throw std::domain_error("nonlocal term nonpositive; initialization outside the mountain-pass cone");
    // divided through by t^(N-2) = t
    auto phi = [=](double t) {
        return (kDim - 2) / 2.0 * A + kDim / 2.0 * a * B * t * t -
               (kDim + alpha) / 2.0 * C * std::pow(t, alpha + 2.0);
    };
    double hi = 1.0;
    while (phi(hi) > 0.0) hi *= 2.0;
    double lo = hi;
    while (lo > 1e-300 && phi(lo) <= 0.0) lo *= 0.5;
    if (phi(lo) <= 0.0) return 0.0;  // A = B = 0
    boost::uintmax_t max_iter = 200;
    auto [l, r] = boost::math::tools::toms748_solve(
        phi, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    return 0.5 * (l + r);
}

PohozaevProjection pohozaev_project(const ScalarField& u, double a, const Nonlinearity& nl,
                                    const RieszOperator& riesz, Interpolation interp) {
    const PohozaevTerms t = pohozaev(u, a, nl, riesz);
    const double ts = pohozaev_root(t.A, t.B, t.C, a, riesz.alpha());
    return {ts, dilate(u, ts, interp)};
}

SolverMethod parse_solver_method(const std::string& name) {
    if (name == "source_iteration") return SolverMethod::source_iteration;
    if (name == "sobolev_flow") return SolverMethod::sobolev_flow;
    throw std::invalid_argument("unknown solver method '" + name + "'");
}

std::string to_string(SolverMethod m) {
    return m == SolverMethod::source_iteration ? "source_iteration" : "sobolev_flow";
}

namespace {

double collapse_guard(const ScalarField& u) {
    const double n2 = l2_norm(u);
    if (!(n2 >= 1e-8) || !u.all_finite()) throw TrivialAttractorError();
    return n2;
}

// <grad L_a(s u), u> for the Nehari scaling of the seed
double nehari_slope(const ScalarField& u, double s, double a, const Nonlinearity& nl,
                    const RieszOperator& riesz) {
    const ScalarField su = s * u;
    return inner(grad_limit(su, a, nl, riesz), u);
}

}  // namespace

ScalarField nehari_rescale(const ScalarField& u, double a, const Nonlinearity& nl,
                           const RieszOperator& riesz) {
    const double quad = inner(apply_helmholtz(u, a), u);
    if (nl.kind() == Nonlinearity::Kind::power) {
        // <N(s u), s u> = s^(2p) <N(u), u>
        const ScalarField Fu = eval_F(nl, u);
        const double cubic = nl.exponent() * inner(riesz.convolve(Fu), Fu);
        if (!(cubic > 0.0)) throw TrivialAttractorError();
        return std::pow(quad / cubic, 1.0 / (2.0 * nl.exponent() - 2.0)) * u;
    }
    // secant on s -> <grad L_a(s u), u> / s
    auto slope = [&](double s) { return nehari_slope(u, s, a, nl, riesz) / s; };
    double s0 = 1.0, s1 = 1.05;
    double f0 = slope(s0), f1 = slope(s1);
    for (int it = 0; it < 30 && std::abs(f1) > 1e-14 * quad; ++it) {
        const double s2 = std::max(0.2 * s1, s1 - f1 * (s1 - s0) / (f1 - f0));
        s0 = s1;
        f0 = f1;
        s1 = s2;
        f1 = slope(s1);
    }
    return s1 * u;
}

namespace {

struct Residual {
    double value;
    ScalarField conv;  // I_alpha * F(u)
};

Residual residual_of(const ScalarField& u, double a, const Nonlinearity& nl,
                     const RieszOperator& riesz) {
    ScalarField conv = riesz.convolve(eval_F(nl, u));
    ScalarField g = apply_helmholtz(u, a);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= conv[i] * nl.f(u[i]);
    return {l2_norm(g) / l2_norm(u), std::move(conv)};
}

}  // namespace

ScalarField default_seed(const GridSpec& grid, double a, const Nonlinearity& nl,
                         const RieszOperator& riesz) {
    const NonlinearityReport rep = check_hypotheses(nl, riesz.alpha());
    const double amp = std::max(1.0, 2.0 * rep.s0);
    const double width2 = 2.0 / a;
    ScalarField u = ScalarField::from_function(grid, [&](const Vec3& x) {
        return amp * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / width2);
    });
    // raise the amplitude until the nonlocal part wins, then bisect onto the Nehari set
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (nehari_slope(u, hi, a, nl, riesz) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60) throw std::runtime_error("seed: nonlocal term never dominates");
    }
    if (lo == 0.0) {
        lo = hi / 2.0;
        while (lo > 1e-6 && nehari_slope(u, lo, a, nl, riesz) <= 0.0) lo /= 2.0;
    }
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (nehari_slope(u, mid, a, nl, riesz) > 0.0 ? lo : hi) = mid;
    }
    u *= 0.5 * (lo + hi);
    return u;
}

GroundState solve_ground_state(double a, const Nonlinearity& nl, const RieszOperator& riesz,
                               const LimitSolverOptions& opts,
                               const std::optional<ScalarField>& seed) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_ground_state requires a > 0");
    if (!check_hypotheses(nl, riesz.alpha()).ok())
        throw std::invalid_argument("nonlinearity " + nl.name() + " fails the growth/positivity checks");
    const GridSpec& grid = riesz.grid();
    ScalarField u = seed ? *seed : default_seed(grid, a, nl, riesz);
    if (!(u.grid() == grid)) throw std::invalid_argument("seed field lives on another grid");
    u = pohozaev_project(u, a, nl, riesz).u;
    collapse_guard(u);

    GroundState gs;
    gs.a = a;
    gs.method = opts.method;
    Residual res = residual_of(u, a, nl, riesz);
    gs.residual_history.push_back(res.value);
    double tau = opts.tau;
    double energy = energy_limit(u, a, nl, riesz);
    const double q = nl.effective_power();
    const double gamma = (2.0 * q - 1.0) / (2.0 * q - 2.0);

    int it = 0;
    for (; it < opts.max_iter && res.value > opts.grad_tol; ++it) {
        ScalarField next(grid);
        if (opts.method == SolverMethod::source_iteration) {
            ScalarField nonlin(grid);
            for (std::size_t i = 0; i < u.size(); ++i) nonlin[i] = res.conv[i] * nl.f(u[i]);
            const double num = inner(apply_helmholtz(u, a), u);
            const double den = inner(nonlin, u);
            if (!(den > 0.0)) throw TrivialAttractorError();
            next = helmholtz_inverse(nonlin, a);
            next *= std::pow(num / den, gamma);

        } else {
            ScalarField g = apply_helmholtz(u, a);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] -= res.conv[i] * nl.f(u[i]);
            const ScalarField step = helmholtz_inverse(g, a);
            for (int tries = 0;; ++tries) {
                next = u;
                next.axpy(-tau, step);
                next = nehari_rescale(next, a, nl, riesz);
                const double e_next = energy_limit(next, a, nl, riesz);
                if (e_next <= energy + 1e-12 * std::abs(energy) || tries >= 30) {
                    energy = e_next;
                    break;
                }
                tau *= 0.5;
            }
        }
        collapse_guard(next);
        u = std::move(next);
        res = residual_of(u, a, nl, riesz);
        gs.residual_history.push_back(res.value);
    }

    gs.U = recenter_on_max(u);
    gs.iterations = it;
    gs.terms = pohozaev(gs.U, a, nl, riesz);
    gs.energy = 0.5 * (gs.terms.A + a * gs.terms.B) - 0.5 * gs.terms.C;
    gs.pohozaev_resid = gs.terms.relative();
    gs.grad_resid = residual_of(gs.U, a, nl, riesz).value;
    gs.converged = gs.grad_resid <= opts.grad_tol && gs.pohozaev_resid <= opts.pohozaev_tol;
    return gs;
}

std::vector<CurvePoint> energy_curve(const std::vector<double>& a_list, const Nonlinearity& nl,
                                     const RieszOperator& riesz, const LimitSolverOptions& opts) {
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        if (!(a_list[i] > 0.0)) throw std::invalid_argument("energy_curve: a must be positive");
        if (i > 0 && a_list[i] < a_list[i - 1])
            throw std::invalid_argument("energy_curve: a_list must be ascending");
    }
    std::vector<CurvePoint> out;
    std::optional<ScalarField> warm;
    for (double a : a_list) {
        const GroundState gs = solve_ground_state(a, nl, riesz, opts, warm);
        out.push_back({a, gs.energy, gs.converged});
        warm = gs.U;
    }
    return out;
}

double power_energy_exponent(double p, double alpha) {
    // u(x) = a^theta w(sqrt(a) x) with theta = (2 + alpha) / (4 (p - 1)); E_a = a^(2 theta + 1 - N/2) E_1
    const double theta = (2.0 + alpha) / (4.0 * (p - 1.0));
    return 2.0 * theta + 1.0 - kDim / 2.0;
}

double dilation_g1(double t, double alpha) {
    return std::pow(t, kDim - 2) / 2.0 - (kDim - 2) / (kDim + alpha) * std::pow(t, kDim + alpha) / 2.0;
}

double dilation_g2(double t, double alpha) {
    return std::pow(t, kDim) / 2.0 - kDim / (kDim + alpha) * std::pow(t, kDim + alpha) / 2.0;
}

DilationProfile dilation_profile(const ScalarField& U, double a, const Nonlinearity& nl,
                                 const RieszOperator& riesz, const std::vector<double>& t_grid,
                                 double min_resampled_t) {
    const double alpha = riesz.alpha();
    const PohozaevTerms terms = pohozaev(U, a, nl, riesz);
    DilationProfile prof;
    prof.A = terms.A;
    prof.B = terms.B;
    prof.C = terms.C;
    double best = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("dilation_profile: t must be positive");
        const double e = 0.5 * (t * prof.A + t * t * t * a * prof.B - std::pow(t, 3.0 + alpha) * prof.C);
        prof.t.push_back(t);
        prof.energy.push_back(e);
        prof.predicted.push_back(dilation_g1(t, alpha) * prof.A + dilation_g2(t, alpha) * a * prof.B);
        prof.resampled.push_back(t >= min_resampled_t ? energy_limit(dilate(U, t), a, nl, riesz)
                                                      : std::numeric_limits<double>::quiet_NaN());
        if (e > best) {
            best = e;
            prof.argmax_t = t;
        }
    }
    return prof;
}

}  // namespace choquard
