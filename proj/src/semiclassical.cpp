#include "choquard/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "choquard/resample.hpp"
#include "choquard/spectral.hpp"

namespace choquard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec3 scaled(const Vec3& x, double s) { return {s * x[0], s * x[1], s * x[2]}; }

int next_power_of_two(double v) {
    int n = 16;
    while (n < v) n *= 2;
    return n;
}

// Second variation of Gamma_eps frozen at u; one Riesz convolution per application.
class Linearization {
public:
    Linearization(const PenalizedFunctional& F, const ScalarField& u)
        : F_(F), fu_(eval_f(F.nonlinearity(), u)), chi_u_(hadamard(F.chi(), u)), vt_(u.grid()) {
        excess_ = std::max(0.0, inner(chi_u_, u) - F.penalization().threshold);
        const ScalarField conv = F.riesz().convolve(eval_F(F.nonlinearity(), u));
        const Nonlinearity& nl = F.nonlinearity();
        for (std::size_t i = 0; i < u.size(); ++i)
            vt_[i] = F.scaled_potential()[i] + 4.0 * excess_ * F.chi()[i] - conv[i] * nl.df(u[i]);
    }

    ScalarField apply(const ScalarField& v) const {
        ScalarField out = laplacian(v);
        out *= -1.0;
        const ScalarField a1 = F_.riesz().convolve(hadamard(fu_, v));
        const double coupling = excess_ > 0.0 ? 8.0 * inner(chi_u_, v) : 0.0;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += vt_[i] * v[i] - a1[i] * fu_[i] + coupling * chi_u_[i];
        return out;
    }

private:
    const PenalizedFunctional& F_;
    ScalarField fu_, chi_u_, vt_;
    double excess_ = 0.0;
};

ScalarField precondition(const ScalarField& r) { return helmholtz_inverse(r, 1.0); }

// Restarted GMRES for A x = b, right-preconditioned by (-Delta + 1)^-1.
ScalarField gmres(const Linearization& A, const ScalarField& b, double rel_tol, int m, int restarts) {
    ScalarField x(b.grid());
    const double b_norm = l2_norm(b);
    if (b_norm == 0.0) return x;
    for (int cycle = 0; cycle < restarts; ++cycle) {
        ScalarField r = b - A.apply(x);
        const double beta = l2_norm(r);
        if (beta <= rel_tol * b_norm) break;
        std::vector<ScalarField> V, Z;
        std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
        r *= 1.0 / beta;
        V.push_back(std::move(r));
        g[0] = beta;
        int k = 0;
        for (int j = 0; j < m; ++j) {
            Z.push_back(precondition(V[j]));
            ScalarField w = A.apply(Z[j]);
            for (int i = 0; i <= j; ++i) {
                H[i][j] = inner(w, V[i]);
                w.axpy(-H[i][j], V[i]);
            }
            H[j + 1][j] = l2_norm(w);
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H[i][j] + sn[i] * H[i + 1][j];
                H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
                H[i][j] = t;
            }
            const double rho = std::hypot(H[j][j], H[j + 1][j]);
            cs[j] = H[j][j] / rho;
            sn[j] = H[j + 1][j] / rho;
            H[j][j] = rho;
            H[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            k = j + 1;
            if (std::abs(g[j + 1]) <= rel_tol * b_norm || w.max_abs() == 0.0) break;
            w *= 1.0 / l2_norm(w);
            V.push_back(std::move(w));
        }
        std::vector<double> y(k);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int c = i + 1; c < k; ++c) s -= H[i][c] * y[c];
            y[i] = s / H[i][i];
        }
        for (int i = 0; i < k; ++i) x.axpy(y[i], Z[i]);
    }
    return x;
}

double relative_residual(const ScalarField& g, const ScalarField& u) {
    const double un = l2_norm(u);
    return un > 0.0 ? l2_norm(g) / un : std::numeric_limits<double>::infinity();
}

}  // namespace

double cutoff(double r, double beta) {
    if (r <= beta) return 1.0;
    if (r >= 2.0 * beta) return 0.0;
    const double s = (r - beta) / beta;
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double ansatz_delta(const PotentialSpec& pot, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("delta fraction must lie in (0, 1)");
    return fraction * std::min(pot.dist_minima_to_complement(), pot.min_well_gap());
}

AnsatzSpec make_ansatz(const PotentialSpec& pot, const Nonlinearity& nl, const RieszOperator& riesz,
                       const AnsatzOptions& opts) {
    if (!(opts.beta_fraction > 0.0 && opts.beta_fraction < 1.0))
        throw std::invalid_argument("beta fraction must lie in (0, 1)");
    AnsatzSpec a;
    a.delta = ansatz_delta(pot, opts.delta_fraction);
    a.beta = opts.beta_fraction * a.delta;
    for (std::size_t i = 0; i < pot.size(); ++i) {
        const Well& w = pot.wells()[i];
        a.anchors.push_back(w.center);
        const auto same = std::find_if(pot.wells().begin(), pot.wells().begin() + i,
                                       [&](const Well& o) { return o.depth == w.depth; });
        if (same != pot.wells().begin() + i) {
            a.profiles.push_back(a.profiles[same - pot.wells().begin()]);
            continue;
        }
        GroundState gs = solve_ground_state(w.depth, nl, riesz, opts.limit);
        if (!(gs.grad_resid <= opts.limit.grad_tol))
            throw std::runtime_error("limit profile for well " + std::to_string(i) + " did not converge");
        a.profiles.push_back(std::move(gs));
    }
    validate(a, pot);
    return a;
}

void validate(const AnsatzSpec& a, const PotentialSpec& pot) {
    const std::size_t k = pot.size();
    if (a.anchors.size() != k || a.profiles.size() != k)
        throw std::invalid_argument("ansatz needs one anchor and one profile per well");
    if (!(a.beta > 0.0 && a.beta < a.delta)) throw std::invalid_argument("ansatz requires 0 < beta < delta");
    for (std::size_t i = 0; i < k; ++i) {
        const Well& w = pot.wells()[i];
        const double off = distance(a.anchors[i], w.center);
        if (off > a.beta) throw std::invalid_argument("anchor " + std::to_string(i) + " is outside (M^i)^beta");
        if (off + 2.0 * a.beta >= w.radius)
            throw std::invalid_argument("cutoff ball of well " + std::to_string(i) + " leaves its well");
        if (!(a.profiles[i].U.grid() == a.profiles[0].U.grid()))
            throw std::invalid_argument("ansatz profiles must share one grid");
        for (std::size_t j = 0; j < i; ++j)
            if (distance(a.anchors[i], a.anchors[j]) <= 4.0 * a.beta)
                throw std::invalid_argument("cutoff balls overlap");
    }
}

ScalarField build_initial_guess(const AnsatzSpec& a, const PotentialSpec& pot, const PenalizationSpec& pen) {
    validate(pen);
    validate(a, pot);
    const GridSpec& g = a.profiles.front().U.grid();
    const double eps = pen.epsilon;
    double reach = 0.0;
    for (const Vec3& x : a.anchors)
        for (double c : x) reach = std::max(reach, std::abs(c) + 2.0 * a.beta);
    const double need = reach / eps;
    if (need > g.half_length()) {
        const int n = next_power_of_two(g.n() * need / g.half_length());
        throw SizingError("box too small for epsilon = " + std::to_string(eps) + ": need L >= " +
                              std::to_string(need) + " (n >= " + std::to_string(n) + " at this spacing)",
                          need, n);
    }
    ScalarField guess(g);
    for (std::size_t i = 0; i < a.anchors.size(); ++i) {
        const Vec3 shift = scaled(a.anchors[i], 1.0 / eps);
        const ScalarField moved = translate(a.profiles[i].U, shift);
        const ScalarField phi = ScalarField::from_function(
            g, [&](const Vec3& y) { return cutoff(eps * distance(y, shift), a.beta); });
        guess += hadamard(phi, moved);
    }
    return guess;
}

std::vector<PathProfile> path_profiles(const AnsatzSpec& a, const PotentialSpec& pot, const PenalizationSpec& pen,
                                       const Nonlinearity& nl, const RieszOperator& riesz,
                                       const std::vector<double>& t_grid) {
    validate(pen);
    validate(a, pot);
    if (t_grid.empty()) throw std::invalid_argument("path t_grid is empty");
    for (std::size_t s = 0; s < t_grid.size(); ++s)
        if (!(t_grid[s] > 0.0) || (s > 0 && !(t_grid[s] > t_grid[s - 1])))
            throw std::invalid_argument("path t_grid must be positive and ascending");
    const GridSpec& g = a.profiles.front().U.grid();
    if (!(riesz.grid() == g)) throw std::invalid_argument("Riesz operator and profiles use different grids");
    const double eps = pen.epsilon, alpha = riesz.alpha(), w3 = g.cell_volume();
    const double chi_out = std::pow(eps, -pen.mu);

    std::vector<PathProfile> out;
    double E = 0.0;
    for (const GroundState& p : a.profiles) E += p.energy;
    double E_tilde = 0.0;
    for (const GroundState& p : a.profiles) E_tilde = std::max(E_tilde, E - p.energy);

    for (std::size_t i = 0; i < a.anchors.size(); ++i) {
        PathProfile pp;
        pp.well = static_cast<int>(i);
        pp.epsilon = eps;
        pp.T = kNaN;
        pp.C = -std::numeric_limits<double>::infinity();
        const ScalarField& U = a.profiles[i].U;
        const Vec3& xi = a.anchors[i];
        for (double t : t_grid) {
            // W(y) = w((y - x_i/eps) / t) with w(z) = phi(eps t |z|) U(z)
            ScalarField w(g);
            double pot_sum = 0.0, chi_sum = 0.0;
            for (int I = 0; I < g.n(); ++I)
                for (int J = 0; J < g.n(); ++J)
                    for (int K = 0; K < g.n(); ++K) {
                        const Vec3 z = g.node(I, J, K);
                        const double v = cutoff(eps * t * norm(z), a.beta) * U.at(I, J, K);
                        w.at(I, J, K) = v;
                        if (v == 0.0) continue;
                        const Vec3 x{xi[0] + eps * t * z[0], xi[1] + eps * t * z[1], xi[2] + eps * t * z[2]};
                        pot_sum += pot(x) * v * v;
                        if (pot.well_index(x) != static_cast<int>(i)) chi_sum += chi_out * v * v;
                    }
            const double t3 = t * t * t;
            const double kinetic = t * dirichlet_energy(w);
            const double potential = t3 * pot_sum * w3;
            const double nonlocal = std::pow(t, 3.0 + alpha) * nonlocal_energy(w, nl, riesz);
            const double excess = std::max(0.0, t3 * chi_sum * w3 - pen.threshold);
            const double gamma = 0.5 * (kinetic + potential) - 0.5 * nonlocal + excess * excess;
            pp.t.push_back(t);
            pp.gamma.push_back(gamma);
            if (gamma > pp.C) {
                pp.C = gamma;
                pp.argmax_t = t;
            }
            if (std::isnan(pp.T) && gamma < -2.0) pp.T = t;
        }
        pp.E = E;
        pp.E_tilde = E_tilde;
        out.push_back(std::move(pp));
    }
    double D = 0.0;
    for (const PathProfile& pp : out) D += pp.C;
    for (PathProfile& pp : out) pp.D = D;
    return out;
}

PathProfile path_profile(const AnsatzSpec& a, const PotentialSpec& pot, const PenalizationSpec& pen,
                         const Nonlinearity& nl, const RieszOperator& riesz, int well,
                         const std::vector<double>& t_grid) {
    if (well < 0 || well >= static_cast<int>(pot.size())) throw std::invalid_argument("well index out of range");
    std::vector<PathProfile> all = path_profiles(a, pot, pen, nl, riesz, t_grid);
    PathProfile pp = std::move(all[well]);
    if (std::isnan(pp.T))
        throw std::runtime_error("path value never drops below -2 on t_grid; extend T_search");
    return pp;
}

double eps_norm(const ScalarField& w, const ScalarField& v_eps) {
    return std::sqrt(dirichlet_energy(w) + inner(hadamard(v_eps, w), w));
}

PeakSet find_peaks(const ScalarField& u, const PotentialSpec& pot, double epsilon, double floor_fraction) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    const double h = g.spacing();
    const double floor = floor_fraction * u.max_value();
    auto wrap = [n](int v) { return ((v % n) + n) % n; };
    const std::size_t k = pot.size();
    PeakSet ps;
    ps.peaks.assign(k, {kNaN, kNaN, kNaN});
    ps.values.assign(k, -std::numeric_limits<double>::infinity());
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const double v = u.at(i, j, l);
                if (!(v > floor)) continue;
                const std::size_t self = g.index(i, j, l);
                bool is_max = true;
                for (int di = -1; di <= 1 && is_max; ++di)
                    for (int dj = -1; dj <= 1 && is_max; ++dj)
                        for (int dl = -1; dl <= 1 && is_max; ++dl) {
                            if (di == 0 && dj == 0 && dl == 0) continue;
                            const int a = wrap(i + di), b = wrap(j + dj), c = wrap(l + dl);
                            const double nb = u.at(a, b, c);
                            // on a plateau the smallest index wins
                            if (nb > v || (nb == v && g.index(a, b, c) < self)) is_max = false;
                        }
                if (!is_max) continue;
                ++ps.raw_count;
                // parabolic refinement along each axis
                const std::array<int, 3> idx{i, j, l};
                Vec3 y = g.node(i, j, l);
                for (int ax = 0; ax < 3; ++ax) {
                    std::array<int, 3> lo = idx, hi = idx;
                    lo[ax] = wrap(idx[ax] - 1);
                    hi[ax] = wrap(idx[ax] + 1);
                    const double um = u.at(lo[0], lo[1], lo[2]), up = u.at(hi[0], hi[1], hi[2]);
                    const double curv = um - 2.0 * v + up;
                    if (curv < 0.0) y[ax] += std::clamp(0.5 * (um - up) / curv, -0.5, 0.5) * h;
                }
                const Vec3 x = scaled(y, epsilon);
                std::size_t best = 0;
                for (std::size_t w = 1; w < k; ++w)
                    if (distance(x, pot.wells()[w].center) < distance(x, pot.wells()[best].center)) best = w;
                ++count[best];
                if (v > ps.values[best]) {
                    ps.values[best] = v;
                    ps.peaks[best] = x;
                }
            }
    ps.one_per_well = std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
    return ps;
}

SemiclassicalSolution solve_penalized(const ScalarField& guess, const PotentialSpec& pot, const PenalizationSpec& pen,
                                      const Nonlinearity& nl, const RieszOperator& riesz,
                                      const PenalizedSolverOptions& opts) {
    validate(pen);
    if (!(guess.grid() == riesz.grid())) throw std::invalid_argument("guess and Riesz operator use different grids");
    if (!guess.all_finite()) throw std::invalid_argument("guess has non-finite values");
    if (l2_norm(guess) == 0.0) throw std::invalid_argument("guess is identically zero");
    const GridSpec& g = guess.grid();
    const PenalizedFunctional F(g, pot, pen, nl, riesz);

    SemiclassicalSolution sol;
    sol.epsilon = pen.epsilon;
    ScalarField u = guess;
    ScalarField grad = F.gradient(u);
    double res = relative_residual(grad, u);
    const double guess_norm = l2_norm(guess);
    int it = 0;
    for (; it < opts.max_newton; ++it) {
        sol.residual_history.push_back(res);
        if (res <= opts.grad_tol) break;
        if (l2_norm(u) < 1e-8 * guess_norm) throw TrivialAttractorError();
        if (opts.energy_cap > 0.0 && F.energy(u).total > opts.energy_cap)
            throw SolverDivergence("penalized energy exceeded the cap " + std::to_string(opts.energy_cap),
                                   sol.residual_history);
        const Linearization lin(F, u);
        const double eta = std::clamp(res, 1e-4, 0.1);
        const ScalarField step = gmres(lin, -1.0 * grad, eta, opts.krylov_dim, opts.krylov_restarts);
        const double gn = l2_norm(grad);
        bool accepted = false;
        for (double lambda = 1.0; lambda >= 1.0 / 64.0; lambda *= 0.5) {
            ScalarField trial = u;
            trial.axpy(lambda, step);
            ScalarField tg = F.gradient(trial);
            if (tg.all_finite() && l2_norm(tg) <= (1.0 - 1e-4 * lambda) * gn) {
                u = std::move(trial);
                grad = std::move(tg);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // preconditioned descent on 1/2 ||grad||^2
            const ScalarField d = -1.0 * precondition(lin.apply(precondition(grad)));
            for (double lambda = 1.0; lambda >= 1e-6; lambda *= 0.25) {
                ScalarField trial = u;
                trial.axpy(lambda, d);
                ScalarField tg = F.gradient(trial);
                if (tg.all_finite() && l2_norm(tg) < gn) {
                    u = std::move(trial);
                    grad = std::move(tg);
                    accepted = true;
                    ++sol.fallback_steps;
                    break;
                }
            }
        }
        res = relative_residual(grad, u);
        if (!accepted) {
            ++it;
            sol.residual_history.push_back(res);
            break;
        }
    }
    sol.iterations = it;
    sol.grad_resid = res;
    sol.converged = res <= opts.grad_tol;
    sol.energy = F.energy(u);
    sol.gamma_energy = sol.energy.total;
    sol.q_value = sol.energy.penalty;

    const PeakSet ps = find_peaks(u, pot, pen.epsilon, opts.peak_floor);
    sol.peaks = ps.peaks;
    sol.peak_values = ps.values;
    sol.raw_peak_count = ps.raw_count;
    sol.peak_count_ok = ps.one_per_well;
    std::vector<Vec3> centers;
    for (std::size_t i = 0; i < pot.size(); ++i) {
        const Well& w = pot.wells()[i];
        const double d = distance(ps.peaks[i], w.center);
        sol.dist_to_M.push_back(d);
        sol.peak_in_well.push_back(d <= w.radius);
        if (std::isfinite(d)) centers.push_back(scaled(ps.peaks[i], 1.0 / pen.epsilon));
    }
    sol.decay.rate = kNaN;
    sol.decay_rate_original = kNaN;
    if (!centers.empty()) {
        try {
            sol.decay = opts.decay_r2 > 0.0 ? decay_fit(u, centers, opts.decay_r1, opts.decay_r2)
                                            : decay_fit(u, centers);
            sol.decay_rate_original = sol.decay.rate / pen.epsilon;
        } catch (const std::invalid_argument&) {
        }
    }
    const double gnorm = eps_norm(guess, F.scaled_potential());
    sol.ansatz_distance = eps_norm(u - guess, F.scaled_potential()) / gnorm;
    sol.within_d = sol.ansatz_distance <= opts.d_fraction;
    double outside = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (F.chi()[i] > 0.0) outside += u[i] * u[i];
    sol.mass_outside = outside * g.cell_volume();
    sol.negative_part = std::max(0.0, -u.min_value()) / u.max_value();
    sol.u = std::move(u);
    return sol;
}

double profile_distance(const ScalarField& u, const ScalarField& U, const std::vector<Vec3>& peaks, int well,
                        double epsilon) {
    require_same_grid(u, U, "profile_distance");
    const GridSpec& g = u.grid();
    std::vector<Vec3> ys;
    for (const Vec3& p : peaks) ys.push_back(scaled(p, 1.0 / epsilon));
    const Vec3& yi = ys.at(well);
    if (!std::isfinite(yi[0])) return kNaN;
    const ScalarField moved = translate(U, yi);
    double sum = 0.0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                const Vec3 y = g.node(i, j, k);
                const double own = distance(y, yi);
                bool nearest = true;
                for (std::size_t o = 0; o < ys.size() && nearest; ++o)
                    if (static_cast<int>(o) != well && std::isfinite(ys[o][0]) && distance(y, ys[o]) < own)
                        nearest = false;
                if (!nearest) continue;
                const double d = u.at(i, j, k) - moved.at(i, j, k);
                sum += d * d;
            }
    return std::sqrt(sum * g.cell_volume());
}

double sweep_min_half_length(const AnsatzSpec& a, double eps_min) {
    double r = 0.0;
    for (const Vec3& x : a.anchors) r = std::max(r, norm(x));
    return 2.0 * r / eps_min + 10.0;
}

ConcentrationReport sweep_epsilon(const std::vector<double>& eps_list, const AnsatzSpec& a, const PotentialSpec& pot,
                                  const PenalizationSpec& pen_template, const Nonlinearity& nl,
                                  const RieszOperator& riesz, const SweepOptions& opts) {
    if (eps_list.empty()) throw std::invalid_argument("eps_list is empty");
    for (std::size_t s = 0; s < eps_list.size(); ++s)
        if (!(eps_list[s] > 0.0) || (s > 0 && !(eps_list[s] < eps_list[s - 1])))
            throw std::invalid_argument("eps_list must be positive and strictly descending");
    validate(a, pot);
    const double eps_min = eps_list.back();
    const GridSpec& g = riesz.grid();
    const double need = sweep_min_half_length(a, eps_min);
    if (g.half_length() < need) {
        const int n = next_power_of_two(g.n() * need / g.half_length());
        throw SizingError("sweep grid too small: need L >= " + std::to_string(need), need, n);
    }

    ConcentrationReport rep;
    rep.mu = pen_template.mu;
    for (const GroundState& p : a.profiles) rep.E += p.energy;
    for (const GroundState& p : a.profiles) rep.E_tilde = std::max(rep.E_tilde, rep.E - p.energy);

    std::vector<double> t_grid = opts.path_t_grid;
    if (t_grid.empty())
        for (int s = 1; s <= 30; ++s) t_grid.push_back(0.1 * s);
    for (double eps : eps_list) {
        SweepEntry entry;
        entry.epsilon = eps;
        PenalizationSpec pen = pen_template;
        pen.epsilon = eps;
        try {
            entry.D = path_profiles(a, pot, pen, nl, riesz, t_grid).front().D;
            PenalizedSolverOptions so = opts.solver;
            if (so.energy_cap == 0.0) so.energy_cap = 2.0 * entry.D;
            const ScalarField guess = build_initial_guess(a, pot, pen);
            entry.solution = solve_penalized(guess, pot, pen, nl, riesz, so);
            const SemiclassicalSolution& s = entry.solution;
            entry.ok = s.converged;
            if (!s.converged) entry.error = "not converged";
            for (std::size_t i = 0; i < pot.size(); ++i) {
                ConcentrationRow row;
                row.epsilon = eps;
                row.well = static_cast<int>(i);
                row.peak = s.peaks[i];
                row.dist_to_M = s.dist_to_M[i];
                row.gamma = s.gamma_energy;
                row.Q = s.q_value;
                row.grad_resid = s.grad_resid;
                row.decay_rate = s.decay_rate_original;
                row.profile_L2_dist = profile_distance(s.u, a.profiles[i].U, s.peaks, static_cast<int>(i), eps);
                rep.rows.push_back(row);
            }
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
        }
        rep.entries.push_back(std::move(entry));
    }
    rep.D = rep.entries.back().D;

    std::vector<double> lx, ly;
    for (const SweepEntry& e : rep.entries)
        if (e.ok && e.solution.mass_outside > 0.0) {
            lx.push_back(std::log(e.epsilon));
            ly.push_back(std::log(e.solution.mass_outside));
        }
    rep.mass_outside_slope = kNaN;
    if (lx.size() >= 2) {
        const double m = static_cast<double>(lx.size());
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        rep.mass_outside_slope = sxy / sxx;
    }
    return rep;
}

}  // namespace choquard
