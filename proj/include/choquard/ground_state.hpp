#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/resample.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

/// Positive root t* of (N-2)/2 A + N/2 a B t^2 - (N+alpha)/2 C t^(alpha+2) = 0, i.e. the
/// dilation that puts u(./t*) on the Pohozaev manifold. Throws std::domain_error for C <= 0.
double pohozaev_root(double A, double B, double C, double a, double alpha);

struct PohozaevProjection {
    double t_star = 1.0;
    ScalarField u;
};

PohozaevProjection pohozaev_project(const ScalarField& u, double a, const Nonlinearity& nl,
                                    const RieszOperator& riesz,
                                    Interpolation interp = Interpolation::spectral);

enum class SolverMethod { source_iteration, sobolev_flow };
SolverMethod parse_solver_method(const std::string& name);
std::string to_string(SolverMethod m);

struct LimitSolverOptions {
    SolverMethod method = SolverMethod::source_iteration;
    double grad_tol = 1e-6;      // ||grad L_a||_2 / ||u||_2
    double pohozaev_tol = 1e-3;  // |P| / ((N+alpha)/2 C)
    int max_iter = 5000;
    double tau = 0.5;            // initial sobolev_flow step
};

struct GroundState {
    double a = 0.0;
    ScalarField U;
    double energy = 0.0;
    double pohozaev_resid = 0.0;
    double grad_resid = 0.0;
    PohozaevTerms terms;
    SolverMethod method = SolverMethod::source_iteration;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
};

/// The iteration fell into u = 0.
class TrivialAttractorError : public std::runtime_error {
public:
    TrivialAttractorError()
        : std::runtime_error("trivial attractor; reseed (solution collapsed to zero)") {}
};

/// Amplitude s u with <grad L_a(s u), u> = 0 (the Nehari set); exact on the grid.
ScalarField nehari_rescale(const ScalarField& u, double a, const Nonlinearity& nl,
                           const RieszOperator& riesz);

/// Centered Gaussian seed, amplitude raised until the nonlocal term dominates (C > 0,
/// scaled onto the Nehari set) so the Pohozaev projection is well posed.
ScalarField default_seed(const GridSpec& grid, double a, const Nonlinearity& nl,
                         const RieszOperator& riesz);

/// Least-energy solution of -Delta u + a u = (I_alpha * F(u)) f(u). Non-convergence is
/// reported through GroundState::converged, collapse throws TrivialAttractorError.
GroundState solve_ground_state(double a, const Nonlinearity& nl, const RieszOperator& riesz,
                               const LimitSolverOptions& opts = {},
                               const std::optional<ScalarField>& seed = std::nullopt);

struct CurvePoint {
    double a = 0.0;
    double energy = 0.0;
    bool converged = false;
};

/// Ground-state energies along an ascending list of a, warm starting each solve.
std::vector<CurvePoint> energy_curve(const std::vector<double>& a_list, const Nonlinearity& nl,
                                     const RieszOperator& riesz, const LimitSolverOptions& opts = {});

/// Exponent k in E_a = E_1 a^k for F(s) = s_+^p / p (from u(x) = a^theta w(sqrt(a) x)).
double power_energy_exponent(double p, double alpha);

// Coefficients of L_a(U(./t)) = g1(t) A + g2(t) a B for a Pohozaev-balanced U.
double dilation_g1(double t, double alpha);
double dilation_g2(double t, double alpha);

struct DilationProfile {
    std::vector<double> t;
    std::vector<double> energy;     // t A/2 + t^3 a B/2 - t^(3+alpha) C/2 from the terms of U
    std::vector<double> predicted;  // g1(t) A + g2(t) a B
    std::vector<double> resampled;  // L_a of the resampled U(./t); NaN below min_resampled_t
    double argmax_t = 0.0;
    double A = 0.0, B = 0.0, C = 0.0;
};

/// Below min_resampled_t the squeezed field falls under the grid spacing, so only the
/// scaling law is reported there.
DilationProfile dilation_profile(const ScalarField& U, double a, const Nonlinearity& nl,
                                 const RieszOperator& riesz, const std::vector<double>& t_grid,
                                 double min_resampled_t = 0.7);

}  // namespace choquard
