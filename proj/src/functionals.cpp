#include "choquard/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "choquard/spectral.hpp"

namespace choquard {

double nonlocal_energy(const ScalarField& u, const Nonlinearity& nl, const RieszOperator& riesz) {
    const ScalarField Fu = eval_F(nl, u);
    return inner(riesz.convolve(Fu), Fu);
}

double energy_limit(const ScalarField& u, double a, const Nonlinearity& nl,
                    const RieszOperator& riesz) {
    if (!(a > 0.0)) throw std::invalid_argument("energy_limit requires a > 0");
    return 0.5 * (dirichlet_energy(u) + a * inner(u, u)) - 0.5 * nonlocal_energy(u, nl, riesz);
}

ScalarField grad_limit(const ScalarField& u, double a, const Nonlinearity& nl,
                       const RieszOperator& riesz) {
    if (!(a > 0.0)) throw std::invalid_argument("grad_limit requires a > 0");
    ScalarField g = apply_helmholtz(u, a);
    const ScalarField pot = riesz.convolve(eval_F(nl, u));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= pot[i] * nl.f(u[i]);
    return g;
}

namespace {

// -(I * (f(u) v)) f(u) - (I * F(u)) f'(u) v, added into out.
void add_nonlocal_hessian(const ScalarField& u, const ScalarField& v, const Nonlinearity& nl,
                          const RieszOperator& riesz, ScalarField& out) {
    ScalarField fv(u.grid());
    ScalarField fu = eval_f(nl, u);
    for (std::size_t i = 0; i < u.size(); ++i) fv[i] = fu[i] * v[i];
    const ScalarField a1 = riesz.convolve(fv);
    const ScalarField a2 = riesz.convolve(eval_F(nl, u));
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] -= a1[i] * fu[i] + a2[i] * nl.df(u[i]) * v[i];
}

}  // namespace

ScalarField hessian_limit(const ScalarField& u, const ScalarField& v, double a,
                          const Nonlinearity& nl, const RieszOperator& riesz) {
    ScalarField out = apply_helmholtz(v, a);
    add_nonlocal_hessian(u, v, nl, riesz, out);
    return out;
}

double PohozaevTerms::relative() const {
    const double scale = (kDim + alpha) / 2.0 * C;
    if (scale == 0.0) return P == 0.0 ? 0.0 : std::abs(P);
    return std::abs(P) / scale;
}

PohozaevTerms pohozaev(const ScalarField& u, double a, const Nonlinearity& nl,
                       const RieszOperator& riesz) {
    PohozaevTerms t;
    t.alpha = riesz.alpha();
    t.A = dirichlet_energy(u);
    t.B = inner(u, u);
    t.C = nonlocal_energy(u, nl, riesz);
    t.P = (kDim - 2) / 2.0 * t.A + kDim / 2.0 * a * t.B - (kDim + t.alpha) / 2.0 * t.C;
    return t;
}

void validate(const PenalizationSpec& pen) {
    if (!(pen.epsilon > 0.0) || !std::isfinite(pen.epsilon))
        throw std::invalid_argument("penalization epsilon must be > 0");
    if (!(pen.mu > 0.0) || !std::isfinite(pen.mu))
        throw std::invalid_argument("penalization mu must be > 0");
}

namespace {
ScalarField chi_field(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen,
                      int only_well) {
    validate(pen);
    const double outside = std::pow(pen.epsilon, -pen.mu);
    return ScalarField::from_function(grid, [&](const Vec3& x) {
        const int w = pot.well_index({pen.epsilon * x[0], pen.epsilon * x[1], pen.epsilon * x[2]});
        const bool inside = only_well < 0 ? w >= 0 : w == only_well;
        return inside ? 0.0 : outside;
    });
}
}  // namespace

ScalarField build_chi(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen) {
    return chi_field(grid, pot, pen, -1);
}

ScalarField build_chi_i(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen,
                        int well) {
    if (well < 0 || well >= static_cast<int>(pot.size()))
        throw std::out_of_range("well index out of range");
    return chi_field(grid, pot, pen, well);
}

PenalizedFunctional::PenalizedFunctional(const GridSpec& grid, const PotentialSpec& pot,
                                         const PenalizationSpec& pen, const Nonlinearity& nl,
                                         const RieszOperator& riesz)
    : PenalizedFunctional(grid, pot, pen, nl, riesz, build_chi(grid, pot, pen)) {}

PenalizedFunctional::PenalizedFunctional(const GridSpec& grid, const PotentialSpec& pot,
                                         const PenalizationSpec& pen, const Nonlinearity& nl,
                                         const RieszOperator& riesz, ScalarField chi)
    : grid_(grid),
      pot_(pot),
      pen_(pen),
      nl_(nl),
      riesz_(riesz),
      v_eps_(sample_scaled_potential(grid, pot, pen.epsilon)),
      chi_(std::move(chi)) {
    if (!(riesz.grid() == grid)) throw std::invalid_argument("Riesz operator built on another grid");
}

PenalizedFunctional PenalizedFunctional::for_well(const GridSpec& grid, const PotentialSpec& pot,
                                                  const PenalizationSpec& pen,
                                                  const Nonlinearity& nl,
                                                  const RieszOperator& riesz, int well) {
    return PenalizedFunctional(grid, pot, pen, nl, riesz, build_chi_i(grid, pot, pen, well));
}

EnergyReport PenalizedFunctional::energy(const ScalarField& u) const {
    EnergyReport r;
    r.kinetic = dirichlet_energy(u);
    double pot = 0.0, chi = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        pot += v_eps_[i] * u[i] * u[i];
        chi += chi_[i] * u[i] * u[i];
    }
    const double w = grid_.cell_volume();
    r.potential = pot * w;
    r.chi_mass = chi * w;
    r.nonlocal = nonlocal_energy(u, nl_, riesz_);
    const double excess = std::max(0.0, r.chi_mass - pen_.threshold);
    r.penalty = excess * excess;
    r.total = 0.5 * (r.kinetic + r.potential) - 0.5 * r.nonlocal + r.penalty;
    return r;
}

ScalarField PenalizedFunctional::gradient(const ScalarField& u) const {
    const double excess = std::max(0.0, inner(hadamard(chi_, u), u) - pen_.threshold);
    ScalarField g = laplacian(u);
    g *= -1.0;
    const ScalarField conv = riesz_.convolve(eval_F(nl_, u));
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] += (v_eps_[i] + 4.0 * excess * chi_[i]) * u[i] - conv[i] * nl_.f(u[i]);
    return g;
}

ScalarField PenalizedFunctional::hessian(const ScalarField& u, const ScalarField& v) const {
    const ScalarField chi_u = hadamard(chi_, u);
    const double excess = std::max(0.0, inner(chi_u, u) - pen_.threshold);
    const double coupling = excess > 0.0 ? 8.0 * inner(chi_u, v) : 0.0;
    ScalarField out = laplacian(v);
    out *= -1.0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += (v_eps_[i] + 4.0 * excess * chi_[i]) * v[i] + coupling * chi_u[i];
    add_nonlocal_hessian(u, v, nl_, riesz_, out);
    return out;
}

EnergyReport energy_penalized(const ScalarField& u, const PotentialSpec& pot,
                              const PenalizationSpec& pen, const Nonlinearity& nl,
                              const RieszOperator& riesz) {
    return PenalizedFunctional(u.grid(), pot, pen, nl, riesz).energy(u);
}

ScalarField grad_penalized(const ScalarField& u, const PotentialSpec& pot,
                           const PenalizationSpec& pen, const Nonlinearity& nl,
                           const RieszOperator& riesz) {
    return PenalizedFunctional(u.grid(), pot, pen, nl, riesz).gradient(u);
}

}  // namespace choquard
