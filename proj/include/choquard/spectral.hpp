#pragma once

#include "choquard/grid.hpp"

namespace choquard {

/// Fourier-spectral Laplacian on the periodic box; exact for band-limited fields.
ScalarField laplacian(const ScalarField& u);

/// (-Delta + a) u.
ScalarField apply_helmholtz(const ScalarField& u, double a);

/// Solves (-Delta + a) u = rhs in the discrete spectral sense. Throws for a <= 0.
ScalarField helmholtz_inverse(const ScalarField& rhs, double a);

/// ||grad u||_2^2 = -<u, Delta u>.
double dirichlet_energy(const ScalarField& u);
double h1_seminorm(const ScalarField& u);

/// ||u||_H, H = -Delta + a; the metric the solvers measure residuals in.
double helmholtz_norm(const ScalarField& u, double a);

/// Forward then inverse FFT; used to check transform round-off.
ScalarField spectral_round_trip(const ScalarField& u);

/// Squared angular wavenumber |k|^2 of the r2c bin (i, j, kz) on grid g.
double wavenumber_squared(const GridSpec& g, int i, int j, int kz);

}  // namespace choquard
