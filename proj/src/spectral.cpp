#include "choquard/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace choquard {

using detail::RealFft3d;
using detail::signed_frequency;

double wavenumber_squared(const GridSpec& g, int i, int j, int kz) {
    const int n = g.n();
    const double dk = std::numbers::pi / g.half_length();  // 2*pi / (2L)
    const double kx = dk * signed_frequency(i, n);
    const double ky = dk * signed_frequency(j, n);
    const double kk = dk * kz;
    return kx * kx + ky * ky + kk * kk;
}

namespace {

template <class Symbol>
ScalarField apply_symbol(const ScalarField& u, Symbol&& symbol) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    RealFft3d& fft = RealFft3d::local(n);
    auto in = fft.real();
    std::copy(u.values().begin(), u.values().end(), in.begin());
    fft.forward();
    auto spec = fft.spectrum();
    const int nz = n / 2 + 1;
    const double scale = 1.0 / static_cast<double>(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < nz; ++k) {
                const std::size_t idx = (static_cast<std::size_t>(i) * n + j) * nz + k;
                spec[idx] *= symbol(wavenumber_squared(g, i, j, k)) * scale;
            }
    fft.inverse();
    auto out = fft.real();
    return ScalarField(g, std::vector<double>(out.begin(), out.end()));
}

}  // namespace

ScalarField laplacian(const ScalarField& u) {
    return apply_symbol(u, [](double k2) { return -k2; });
}

ScalarField apply_helmholtz(const ScalarField& u, double a) {
    return apply_symbol(u, [a](double k2) { return k2 + a; });
}

ScalarField helmholtz_inverse(const ScalarField& rhs, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("helmholtz_inverse requires a > 0");
    return apply_symbol(rhs, [a](double k2) { return 1.0 / (k2 + a); });
}

double dirichlet_energy(const ScalarField& u) { return -inner(u, laplacian(u)); }

double h1_seminorm(const ScalarField& u) { return std::sqrt(std::max(0.0, dirichlet_energy(u))); }

double helmholtz_norm(const ScalarField& u, double a) {
    return std::sqrt(std::max(0.0, inner(u, apply_helmholtz(u, a))));
}

ScalarField spectral_round_trip(const ScalarField& u) {
    return apply_symbol(u, [](double) { return 1.0; });
}

}  // namespace choquard
