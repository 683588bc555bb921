#include "choquard/riesz.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace choquard {

using detail::RealFft3d;
using detail::signed_frequency;

ZeroModeRule parse_zero_mode_rule(const std::string& name) {
    if (name == "image_calibrated") return ZeroModeRule::image_calibrated;
    if (name == "truncate_to_box_mean") return ZeroModeRule::truncate_to_box_mean;
    if (name == "screen") return ZeroModeRule::screen;
    throw std::invalid_argument("unknown zero-mode rule '" + name + "'");
}

std::string to_string(ZeroModeRule rule) {
    switch (rule) {
        case ZeroModeRule::image_calibrated: return "image_calibrated";
        case ZeroModeRule::truncate_to_box_mean: return "truncate_to_box_mean";
        case ZeroModeRule::screen: return "screen";
    }
    return "?";
}

double riesz_kernel_constant(double alpha) {
    const double pi = std::numbers::pi;
    return std::tgamma((kDim - alpha) / 2.0) /
           (std::tgamma(alpha / 2.0) * std::pow(pi, kDim / 2.0) * std::pow(2.0, alpha));
}

double unit_cube_kernel_integral(double alpha) {
    // Six pyramids |y|,|z| <= x <= 1/2; substituting y = x s, z = x t separates the radial part.
    using boost::math::quadrature::gauss;
    const double e = (alpha - 3.0) / 2.0;
    auto inner_fn = [e](double s) {
        return gauss<double, 40>::integrate(
            [e, s](double t) { return std::pow(1.0 + s * s + t * t, e); }, -1.0, 1.0);
    };
    const double face = gauss<double, 40>::integrate(inner_fn, -1.0, 1.0);
    return 6.0 * std::pow(0.5, alpha) / alpha * face;
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < kDim))
        throw std::invalid_argument("Riesz order alpha must lie in (0, 3)");
}

// Least-squares fit K_free - K_periodic ~ c0 + c2 |x|^2 over 2h <= |x| <= L.
double calibrate_zero_mode(const GridSpec& grid, double alpha, std::vector<double> mult) {
    const int m = 2 * grid.n();
    const double h = grid.spacing();
    const double period = m * h;
    const double c = riesz_kernel_constant(alpha);
    RealFft3d& fft = RealFft3d::local(m);
    auto spec = fft.spectrum();
    for (std::size_t i = 0; i < mult.size(); ++i) spec[i] = mult[i];
    fft.inverse();
    auto kern = fft.real();
    const double vol = period * period * period;
    const double rmin = 2.0 * h, rmax = grid.half_length();
    // normal equations for [1, r^2]
    double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
    for (int i = 0; i < m; ++i) {
        const double x = h * signed_frequency(i, m);
        for (int j = 0; j < m; ++j) {
            const double y = h * signed_frequency(j, m);
            for (int k = 0; k < m; ++k) {
                const double z = h * signed_frequency(k, m);
                const double r2 = x * x + y * y + z * z;
                const double r = std::sqrt(r2);
                if (r < rmin || r > rmax) continue;
                const double diff = c * std::pow(r, alpha - 3.0) -
                                    kern[(static_cast<std::size_t>(i) * m + j) * m + k] / vol;
                s00 += 1.0;
                s01 += r2;
                s11 += r2 * r2;
                b0 += diff;
                b1 += diff * r2;
            }
        }
    }
    const double det = s00 * s11 - s01 * s01;
    const double c0 = (b0 * s11 - b1 * s01) / det;
    return c0 * vol;
}

}  // namespace

RieszOperator::RieszOperator(const GridSpec& grid, double alpha, ZeroModeRule rule, double kappa)
    : grid_(grid), alpha_(alpha), rule_(rule), kappa_(kappa) {
    check_alpha(alpha);
    if (rule == ZeroModeRule::screen && !(kappa > 0.0))
        throw std::invalid_argument("screening length kappa must be positive");
    const int m = padded_n();
    const int mz = m / 2 + 1;
    const double period = m * grid.spacing();
    const double dxi = 1.0 / period;
    std::vector<double> mult(static_cast<std::size_t>(m) * m * mz);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < mz; ++k) {
                const double xi = dxi * std::sqrt(double(signed_frequency(i, m)) * signed_frequency(i, m) +
                                                  double(signed_frequency(j, m)) * signed_frequency(j, m) +
                                                  double(k) * k);
                const double w = two_pi * xi;
                double value = 0.0;
                if (rule == ZeroModeRule::screen)
                    value = std::pow(w * w + kappa * kappa, -alpha / 2.0);
                else if (xi > 0.0)
                    value = std::pow(w, -alpha);
                mult[(static_cast<std::size_t>(i) * m + j) * mz + k] = value;
            }
    if (rule == ZeroModeRule::truncate_to_box_mean)
        mult[0] = riesz_kernel_constant(alpha) * std::pow(period, alpha) *
                  unit_cube_kernel_integral(alpha);
    else if (rule == ZeroModeRule::image_calibrated) {
        mult[0] = calibrate_zero_mode(grid, alpha, mult);
    }
    multiplier_ = std::make_shared<const std::vector<double>>(std::move(mult));
}

ScalarField RieszOperator::convolve(const ScalarField& g) const {
    if (!(g.grid() == grid_)) throw std::invalid_argument("riesz_convolve: grid mismatch");
    const int n = grid_.n();
    const int m = padded_n();
    RealFft3d& fft = RealFft3d::local(m);
    auto buf = fft.real();
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = &g.values()[grid_.index(i, j, 0)];
            std::copy(src, src + n, &buf[(static_cast<std::size_t>(i) * m + j) * m]);
        }
    fft.forward();
    auto spec = fft.spectrum();
    const auto& mult = *multiplier_;
    const double scale = 1.0 / (double(m) * m * m);
    for (std::size_t idx = 0; idx < mult.size(); ++idx) spec[idx] *= mult[idx] * scale;
    fft.inverse();
    ScalarField out(grid_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = &buf[(static_cast<std::size_t>(i) * m + j) * m];
            std::copy(src, src + n, &out.values()[grid_.index(i, j, 0)]);
        }
    return out;
}

bool RieszOperator::free_space_valid(const ScalarField& g) const {
    const double peak = g.max_abs();
    if (peak == 0.0) return true;
    const int n = grid_.n();
    const double edge = 0.75 * grid_.half_length();
    double outer = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 x = grid_.node(i, j, k);
                const double inf = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
                if (inf >= edge) outer = std::max(outer, std::abs(g.at(i, j, k)));
            }
    return outer <= 1e-6 * peak;
}

RieszResult riesz_convolve(const RieszOperator& op, const ScalarField& g) {
    return {op.convolve(g), !op.free_space_valid(g)};
}

}  // namespace choquard
