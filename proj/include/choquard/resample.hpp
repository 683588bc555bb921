#pragma once

#include "choquard/grid.hpp"

namespace choquard {

enum class Interpolation {
    linear,    ///< tensor-product linear (trilinear)
    spectral,  ///< tensor-product trigonometric; exact for band-limited fields
};

/// x -> u(x / t). Samples falling outside the original box read as 0.
ScalarField dilate(const ScalarField& u, double t, Interpolation interp = Interpolation::spectral);

/// x -> u(x - shift), periodic. Whole-node part is an index roll; the fractional
/// remainder is interpolated (spectral by default, which keeps the map an isometry).
ScalarField translate(const ScalarField& u, const Vec3& shift,
                      Interpolation interp = Interpolation::spectral);

}  // namespace choquard
