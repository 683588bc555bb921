#pragma once

#include "choquard/grid.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/potential.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

/// Limiting energy L_a(u) = 1/2 int |grad u|^2 + a u^2 - 1/2 int (I_alpha * F(u)) F(u).
double energy_limit(const ScalarField& u, double a, const Nonlinearity& nl, const RieszOperator& riesz);

/// -Delta u + a u - (I_alpha * F(u)) f(u).
ScalarField grad_limit(const ScalarField& u, double a, const Nonlinearity& nl,
                       const RieszOperator& riesz);

/// Second variation of L_a at u applied to v.
ScalarField hessian_limit(const ScalarField& u, const ScalarField& v, double a,
                          const Nonlinearity& nl, const RieszOperator& riesz);

struct PohozaevTerms {
    double A = 0.0;  // int |grad u|^2
    double B = 0.0;  // int u^2
    double C = 0.0;  // int (I_alpha * F(u)) F(u)
    double P = 0.0;  // (N-2)/2 A + N/2 a B - (N+alpha)/2 C
    /// |P| relative to (N+alpha)/2 C; 0 when u = 0.
    double relative() const;
    double alpha = 0.0;
};

PohozaevTerms pohozaev(const ScalarField& u, double a, const Nonlinearity& nl,
                       const RieszOperator& riesz);

/// int (I_alpha * F(u)) F(u).
double nonlocal_energy(const ScalarField& u, const Nonlinearity& nl, const RieszOperator& riesz);

struct PenalizationSpec {
    double epsilon = 0.5;
    double mu = 2.0;
    double threshold = 1.0;
};

void validate(const PenalizationSpec& pen);

/// 0 on O_eps = {x : eps x in O}, eps^(-mu) elsewhere.
ScalarField build_chi(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen);
/// Same with O replaced by the single well O^i.
ScalarField build_chi_i(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen,
                        int well);

struct EnergyReport {
    double total = 0.0;
    double kinetic = 0.0;    // int |grad u|^2
    double potential = 0.0;  // int V_eps u^2
    double nonlocal = 0.0;   // int (I_alpha * F(u)) F(u)
    double penalty = 0.0;    // Q_eps(u)
    double chi_mass = 0.0;   // int chi_eps u^2
    /// P_eps(u), the energy without the penalty.
    double unpenalized() const { return total - penalty; }
};

/// Gamma_eps = P_eps + Q_eps on the rescaled problem, with V_eps and chi_eps sampled once.
class PenalizedFunctional {
public:
    PenalizedFunctional(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen,
                        const Nonlinearity& nl, const RieszOperator& riesz);
    /// Variant using chi^i_eps (the per-well functional Gamma^i_eps).
    static PenalizedFunctional for_well(const GridSpec& grid, const PotentialSpec& pot,
                                        const PenalizationSpec& pen, const Nonlinearity& nl,
                                        const RieszOperator& riesz, int well);

    EnergyReport energy(const ScalarField& u) const;
    /// -Delta u + V~_eps u - (I_alpha * F(u)) f(u), V~_eps = V_eps + 4 (int chi u^2 - 1)_+ chi.
    ScalarField gradient(const ScalarField& u) const;
    ScalarField hessian(const ScalarField& u, const ScalarField& v) const;

    const ScalarField& scaled_potential() const { return v_eps_; }
    const ScalarField& chi() const { return chi_; }
    const PenalizationSpec& penalization() const { return pen_; }
    const PotentialSpec& potential() const { return pot_; }
    const Nonlinearity& nonlinearity() const { return nl_; }
    const RieszOperator& riesz() const { return riesz_; }
    const GridSpec& grid() const { return grid_; }

private:
    PenalizedFunctional(const GridSpec& grid, const PotentialSpec& pot, const PenalizationSpec& pen,
                        const Nonlinearity& nl, const RieszOperator& riesz, ScalarField chi);

    GridSpec grid_;
    PotentialSpec pot_;
    PenalizationSpec pen_;
    Nonlinearity nl_;
    RieszOperator riesz_;
    ScalarField v_eps_;
    ScalarField chi_;
};

EnergyReport energy_penalized(const ScalarField& u, const PotentialSpec& pot,
                              const PenalizationSpec& pen, const Nonlinearity& nl,
                              const RieszOperator& riesz);
ScalarField grad_penalized(const ScalarField& u, const PotentialSpec& pot,
                           const PenalizationSpec& pen, const Nonlinearity& nl,
                           const RieszOperator& riesz);

}  // namespace choquard
