#pragma once

#include <vector>

#include "choquard/grid.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

/// Upper bound on the sharp Hardy-Littlewood-Sobolev constant for the kernel
/// |x-y|^-(N-alpha) at N = 3. Requires s, r > 1 and 1/s + 1/r = 1 + alpha/3.
double hls_constant_bound(double s, double r, double alpha);

struct HlsCheck {
    double s = 0.0, r = 0.0, alpha = 0.0;
    double lhs = 0.0;     // int int f(x) |x-y|^-(3-alpha) g(y)
    double bound = 0.0;   // hls_constant_bound * ||f||_s ||g||_r
    bool boundary_warning = false;
    /// lhs <= bound with 2% quadrature slack.
    bool ok() const { return lhs <= 1.02 * bound; }
};

/// Bilinear HLS form through the spectral Riesz route (op.alpha() is used).
HlsCheck hls_check(const ScalarField& f, const ScalarField& g, double s, double r,
                   const RieszOperator& op);

/// Same bilinear form by direct O(n^6) summation; the singular self term uses the exact
/// cell average of the kernel. Intended for n <= 16.
double hls_lhs_direct(const ScalarField& f, const ScalarField& g, double alpha);

double lebesgue_norm(const ScalarField& u, double q);

struct DecayFit {
    double rate = 0.0;       // c in u ~ C exp(-c d)
    double prefactor = 0.0;  // C
    double r1 = 0.0, r2 = 0.0;
    double residual = 0.0;   // rms of the log-space residual
    int samples = 0;
};

/// Least squares of log u against d(x) = min_i |x - c_i| over r1 <= d <= r2. Nonpositive
/// samples are skipped; fewer than 50 usable nodes throws "annulus too thin".
DecayFit decay_fit(const ScalarField& u, const std::vector<Vec3>& centers, double r1, double r2);
/// Default annulus (L/4, L/2).
DecayFit decay_fit(const ScalarField& u, const std::vector<Vec3>& centers);

struct SymmetryReport {
    double max_deviation = 0.0;      // over the 48 cube isometries about the center node, / max|u|
    int monotonicity_violations = 0; // increases above 1e-5 max|u| along the six axis rays
};

SymmetryReport symmetry_report(const ScalarField& u);

/// Roll u so its largest value sits on the center node.
ScalarField recenter_on_max(const ScalarField& u);

}  // namespace choquard
