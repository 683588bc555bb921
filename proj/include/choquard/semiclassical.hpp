#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "choquard/diagnostics.hpp"
#include "choquard/functionals.hpp"
#include "choquard/ground_state.hpp"
#include "choquard/potential.hpp"

namespace choquard {

/// C^2 quintic cutoff: 1 on r <= beta, 0 on r >= 2 beta.
double cutoff(double r, double beta);

/// delta = fraction * min(dist(M, O^c), min_{i != j} dist(O^i, O^j)); fraction 1/10 by default.
double ansatz_delta(const PotentialSpec& pot, double fraction = 0.1);

/// Geometry and per-well profiles of the approximate solutions. All fields live on the
/// rescaled grid y = x / epsilon; the profiles U_i are centered and do not depend on epsilon.
struct AnsatzSpec {
    double delta = 0.0;
    double beta = 0.0;
    std::vector<Vec3> anchors;          // x_i in original coordinates, |x_i - c_i| <= beta
    std::vector<GroundState> profiles;  // U_i solving the limit problem with a = m_i
};

struct AnsatzOptions {
    double delta_fraction = 0.1;
    double beta_fraction = 0.9;  // beta = beta_fraction * delta
    LimitSolverOptions limit;
};

/// Anchors at the well centers and U_i from the limit solver on riesz.grid().
AnsatzSpec make_ansatz(const PotentialSpec& pot, const Nonlinearity& nl, const RieszOperator& riesz,
                       const AnsatzOptions& opts = {});

/// Checks 0 < beta < delta, anchors in (M^i)^beta, cutoff supports inside their wells and
/// pairwise disjoint, one profile per well on a common grid.
void validate(const AnsatzSpec& ansatz, const PotentialSpec& pot);

/// The box cannot hold the cutoff balls at this epsilon.
class SizingError : public std::invalid_argument {
public:
    SizingError(const std::string& what, double min_half_length, int min_n)
        : std::invalid_argument(what), min_half_length_(min_half_length), min_n_(min_n) {}
    double min_half_length() const { return min_half_length_; }
    /// Smallest power of two keeping the current spacing at min_half_length.
    int min_n() const { return min_n_; }

private:
    double min_half_length_;
    int min_n_;
};

/// sum_i phi_eps(y - x_i/eps) U_i(y - x_i/eps), phi_eps(y) = cutoff(eps |y|, beta).
ScalarField build_initial_guess(const AnsatzSpec& ansatz, const PotentialSpec& pot,
                                const PenalizationSpec& pen);

struct PathProfile {
    int well = 0;
    double epsilon = 0.0;
    std::vector<double> t;
    std::vector<double> gamma;  // Gamma^i_eps(W^i_{eps,t})
    double T = 0.0;             // first sampled t with gamma < -2
    double C = 0.0;             // max of gamma along the sampled path
    double argmax_t = 0.0;
    double D = 0.0;             // sum over wells of the path maxima
    double E = 0.0;             // sum_i E_{m_i}
    double E_tilde = 0.0;       // max_j sum_{i != j} E_{m_i}
};

/// Gamma^i_eps along W^i_{eps,t} = (phi_eps U_{i,t})(. - x_i/eps). Evaluated after the
/// substitution y = x_i/eps + t z on the profile grid, so small t stays resolved.
/// Throws std::runtime_error when gamma never drops below -2 ("extend T_search").
PathProfile path_profile(const AnsatzSpec& ansatz, const PotentialSpec& pot,
                         const PenalizationSpec& pen, const Nonlinearity& nl,
                         const RieszOperator& riesz, int well, const std::vector<double>& t_grid);

/// All wells at once, without the T_i requirement; T = NaN where gamma stays above -2.
std::vector<PathProfile> path_profiles(const AnsatzSpec& ansatz, const PotentialSpec& pot,
                                       const PenalizationSpec& pen, const Nonlinearity& nl,
                                       const RieszOperator& riesz, const std::vector<double>& t_grid);

struct PenalizedSolverOptions {
    double grad_tol = 1e-5;    // ||grad Gamma_eps||_2 / ||u||_2
    int max_newton = 60;
    int krylov_dim = 40;
    int krylov_restarts = 4;
    double energy_cap = 0.0;   // abort once Gamma_eps exceeds this; 0 disables
    double d_fraction = 0.2;   // ansatz neighborhood radius relative to ||guess||_eps
    double decay_r1 = 0.0;     // decay annulus in rescaled units; 0 selects (L/4, L/2)
    double decay_r2 = 0.0;
    double peak_floor = 1e-3;  // local maxima below this fraction of max u are ignored
};

struct SemiclassicalSolution {
    double epsilon = 0.0;
    ScalarField u;
    EnergyReport energy;       // energy.total is Gamma_eps(u)
    double gamma_energy = 0.0;
    double q_value = 0.0;
    double grad_resid = 0.0;
    bool converged = false;
    int iterations = 0;
    int fallback_steps = 0;
    std::vector<double> residual_history;
    std::vector<Vec3> peaks;          // original coordinates, one per well (NaN if none)
    std::vector<double> peak_values;
    std::vector<double> dist_to_M;
    std::vector<bool> peak_in_well;   // peak lies in the closure of O^i
    bool peak_count_ok = false;       // exactly one cluster per well
    int raw_peak_count = 0;
    DecayFit decay;                   // in rescaled units
    double decay_rate_original = 0.0; // decay.rate / epsilon
    double ansatz_distance = 0.0;     // ||u - guess||_eps / ||guess||_eps
    bool within_d = false;
    double mass_outside = 0.0;        // int over the complement of O_eps of u^2
    double negative_part = 0.0;       // -min(u, 0) / max u, spectral ripple
};

/// Solver left the admissible energy range.
class SolverDivergence : public std::runtime_error {
public:
    SolverDivergence(const std::string& what, std::vector<double> trajectory)
        : std::runtime_error(what), trajectory_(std::move(trajectory)) {}
    const std::vector<double>& trajectory() const { return trajectory_; }

private:
    std::vector<double> trajectory_;
};

/// Inexact Newton on grad Gamma_eps = 0 with GMRES inner solves preconditioned by
/// (-Delta + 1)^-1, falling back to preconditioned residual descent when a Newton step fails.
SemiclassicalSolution solve_penalized(const ScalarField& guess, const PotentialSpec& pot,
                                      const PenalizationSpec& pen, const Nonlinearity& nl,
                                      const RieszOperator& riesz,
                                      const PenalizedSolverOptions& opts = {});

/// ||w||_eps^2 = int |grad w|^2 + V_eps w^2 on the rescaled grid.
double eps_norm(const ScalarField& w, const ScalarField& v_eps);

/// Refined local maxima of u: nodes above all 26 neighbors, clustered by nearest well
/// center, largest per cluster. Positions are in original coordinates.
struct PeakSet {
    std::vector<Vec3> peaks;
    std::vector<double> values;
    int raw_count = 0;
    bool one_per_well = false;
};
PeakSet find_peaks(const ScalarField& u, const PotentialSpec& pot, double epsilon,
                   double floor_fraction = 1e-3);

struct ConcentrationRow {
    double epsilon = 0.0;
    int well = 0;
    Vec3 peak{};
    double dist_to_M = 0.0;
    double gamma = 0.0;
    double Q = 0.0;
    double grad_resid = 0.0;
    double decay_rate = 0.0;  // original coordinates
    double profile_L2_dist = 0.0;
};

struct SweepEntry {
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
    double D = 0.0;  // path estimate at this epsilon; the solver aborts above 2 D
    SemiclassicalSolution solution;
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
    std::vector<SweepEntry> entries;
    double E = 0.0;
    double E_tilde = 0.0;
    double D = 0.0;                   // path estimate at the smallest epsilon
    double mass_outside_slope = 0.0;  // log-log slope of mass outside O_eps against epsilon
    double mu = 0.0;
};

/// Minimum half-length for a sweep down to eps_min: 2 max_i |x_i| / eps_min + 10.
double sweep_min_half_length(const AnsatzSpec& ansatz, double eps_min);

struct SweepOptions {
    PenalizedSolverOptions solver;
    std::vector<double> path_t_grid;  // empty selects 0.1, 0.2, ..., 3
};

/// Solves at each epsilon of a strictly descending list on the shared grid of riesz.
/// A failing entry is recorded and the sweep continues.
ConcentrationReport sweep_epsilon(const std::vector<double>& eps_list, const AnsatzSpec& ansatz,
                                  const PotentialSpec& pot, const PenalizationSpec& pen_template,
                                  const Nonlinearity& nl, const RieszOperator& riesz,
                                  const SweepOptions& opts = {});

/// ||u(. + peak/eps) - U||_2 over the nodes nearer to this peak than to any other.
double profile_distance(const ScalarField& u, const ScalarField& U, const std::vector<Vec3>& peaks,
                        int well, double epsilon);

}  // namespace choquard
