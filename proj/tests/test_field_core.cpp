#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "choquard/field_io.hpp"
#include "choquard/grid.hpp"
#include "choquard/resample.hpp"
#include "choquard/riesz.hpp"
#include "choquard/spectral.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace choquard;
using std::numbers::pi;

TEST_CASE("make_grid sizing") {
    CHECK(make_grid(64, 16.0).spacing() == doctest::Approx(0.5));
    CHECK(make_grid(16, 8.0).spacing() == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_grid(17, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(32, 0.0), std::invalid_argument);
    const GridSpec g = make_grid(16, 8.0);
    CHECK(g.coord(0) == -8.0);
    CHECK(g.coord(g.center()) == 0.0);
}

TEST_CASE("integrate and norms") {
    const GridSpec g8 = make_grid(16, 8.0);
    CHECK(integrate(ScalarField(g8, 1.0)) == doctest::Approx(4096.0));

    const GridSpec g = make_grid(64, 8.0);
    const auto gauss = ScalarField::from_function(g, [](const Vec3& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    CHECK(std::abs(integrate(gauss) / std::pow(pi, 1.5) - 1.0) <= 1e-8);

    std::mt19937_64 rng(7);
    const ScalarField u = testing::random_bumps(g, rng, 3);
    const ScalarField v = testing::random_bumps(g, rng, 3);
    CHECK(integrate(u + v) == doctest::Approx(integrate(u) + integrate(v)).epsilon(1e-13));
}

TEST_CASE("spectral Laplacian") {
    const GridSpec g = make_grid(32, 4.0);
    const double L = g.half_length();
    const auto wave = ScalarField::from_function(g, [L](const Vec3& x) { return std::sin(pi * x[0] / L); });
    const ScalarField lw = laplacian(wave);
    double err = 0.0;
    for (std::size_t i = 0; i < wave.size(); ++i)
        err = std::max(err, std::abs(lw[i] + (pi / L) * (pi / L) * wave[i]));
    CHECK(err / ((pi / L) * (pi / L)) <= 1e-10);

    CHECK(laplacian(ScalarField(g, 3.0)).max_abs() <= 1e-12);

    const GridSpec g64 = make_grid(64, 16.0);
    const auto gauss = ScalarField::from_function(g64, [](const Vec3& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const ScalarField lg = laplacian(gauss);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            for (int k = 0; k < 64; ++k) {
                const Vec3 x = g64.node(i, j, k);
                const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                if (r2 > 64.0) continue;
                const double exact = (r2 - 3.0) * std::exp(-0.5 * r2);
                worst = std::max(worst, std::abs(lg.at(i, j, k) - exact));
            }
    CHECK(worst / 3.0 <= 1e-6);
}

TEST_CASE("spectral round trip and Helmholtz inverse") {
    const GridSpec g = make_grid(32, 6.0);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        const ScalarField u = testing::random_noise(g, rng);
        CHECK(l2_norm(spectral_round_trip(u) - u) <= 1e-12 * l2_norm(u));
        const double a = 0.3 + trial;
        const ScalarField back = apply_helmholtz(helmholtz_inverse(u, a), a);
        CHECK(l2_norm(back - u) <= 1e-10 * l2_norm(u));
    }
    const double a = 1.7;
    const ScalarField one = helmholtz_inverse(ScalarField(g, a), a);
    CHECK(std::abs(one.min_value() - 1.0) <= 1e-12);
    CHECK(std::abs(one.max_value() - 1.0) <= 1e-12);

    // plane wave with integer mode (2, 1, 0) is an eigenfunction with symbol |k|^2 + a
    const double L = g.half_length();
    const double kx = 2 * pi / (2 * L) * 2, ky = 2 * pi / (2 * L);
    const auto wave = ScalarField::from_function(g, [&](const Vec3& x) { return std::cos(kx * x[0] + ky * x[1]); });
    const ScalarField sol = helmholtz_inverse(wave, a);
    const ScalarField expect = (1.0 / (kx * kx + ky * ky + a)) * wave;
    CHECK(l2_norm(sol - expect) <= 1e-12 * l2_norm(expect));

    CHECK_THROWS_AS(helmholtz_inverse(wave, 0.0), std::invalid_argument);
}

TEST_CASE("Riesz kernel constant") {
    CHECK(riesz_kernel_constant(2.0) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    // known cube integral of 1/|x| over the unit cube
    CHECK(unit_cube_kernel_integral(2.0) == doctest::Approx(2.3800773).epsilon(1e-7));
}

namespace {
// Potential of a radial density via shell quadrature: phi(r) = (1/r) int_0^r s^2 rho + int_r^inf s rho.
double shell_potential(double r) {
    auto rho = [](double s) { return std::pow(2 * pi, -1.5) * std::exp(-0.5 * s * s); };
    using boost::math::quadrature::gauss_kronrod;
    const double inner_part =
        gauss_kronrod<double, 31>::integrate([&](double s) { return s * s * rho(s); }, 0.0, r, 10, 1e-14);
    const double outer_part =
        gauss_kronrod<double, 31>::integrate([&](double s) { return s * rho(s); }, r, r + 40.0, 10, 1e-14);
    return inner_part / r + outer_part;
}
}  // namespace

TEST_CASE("Riesz convolution of a Gaussian matches the Newtonian potential") {
    // closed form against independent shell quadrature first
    for (double r : {0.3, 1.0, 2.5, 6.0}) {
        const double closed = std::erf(r / std::sqrt(2.0)) / (4 * pi * r);
        CHECK(shell_potential(r) == doctest::Approx(closed).epsilon(1e-10));
    }
    const GridSpec g = make_grid(64, 16.0);
    const RieszOperator op(g, 2.0);
    const auto rho = ScalarField::from_function(g, [](const Vec3& x) {
        return std::pow(2 * pi, -1.5) * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const RieszResult res = riesz_convolve(op, rho);
    CHECK_FALSE(res.decay_warning);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            for (int k = 0; k < 64; ++k) {
                const double r = norm(g.node(i, j, k));
                if (r > 8.0) continue;
                const double exact = r > 0 ? shell_potential(r) : 1.0 / (4 * pi) * std::sqrt(2.0 / pi);
                worst = std::max(worst, std::abs(res.value.at(i, j, k) - exact) / exact);
            }
    MESSAGE("max relative error " << worst);
    CHECK(worst <= 0.01);

    CHECK(op.convolve(ScalarField(g)).max_abs() == 0.0);
}

TEST_CASE("Riesz convolution: linear, positive, self-adjoint") {
    const GridSpec g = make_grid(32, 10.0);
    std::mt19937_64 rng(3);
    for (double alpha : {0.7, 2.0, 2.6}) {
        const RieszOperator op(g, alpha);
        const ScalarField f = testing::random_bumps(g, rng, 2);
        const ScalarField h = testing::random_bumps(g, rng, 2);
        const ScalarField lin = op.convolve(2.0 * f + h) - (2.0 * op.convolve(f) + op.convolve(h));
        CHECK(lin.max_abs() <= 1e-12 * op.convolve(f).max_abs());
        CHECK(op.convolve(f).min_value() >= -1e-8 * f.max_abs());
        const double lhs = inner(op.convolve(f), h);
        const double rhs = inner(f, op.convolve(h));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }
}

TEST_CASE("Riesz zero-mode rules") {
    const GridSpec g = make_grid(32, 8.0);
    const RieszOperator cal(g, 2.0, ZeroModeRule::image_calibrated);
    const RieszOperator box(g, 2.0, ZeroModeRule::truncate_to_box_mean);
    const RieszOperator scr(g, 2.0, ZeroModeRule::screen, 0.5);
    const double period = 4 * g.half_length();
    CHECK(box.zero_mode() == doctest::Approx(period * period * 2.3800773 / (4 * pi)).epsilon(1e-6));
    // only the zero mode differs between the unscreened rules
    for (std::size_t i = 1; i < cal.multiplier().size(); i += 997)
        CHECK(cal.multiplier()[i] == box.multiplier()[i]);
    CHECK(scr.zero_mode() == doctest::Approx(std::pow(0.5, -2.0)));
    CHECK(parse_zero_mode_rule(to_string(ZeroModeRule::screen)) == ZeroModeRule::screen);
    CHECK_THROWS(parse_zero_mode_rule("sharp"));
    CHECK_THROWS_AS(RieszOperator(g, 3.0), std::invalid_argument);
    // decay precondition
    CHECK_FALSE(cal.free_space_valid(ScalarField(g, 1.0)));
    const ScalarField other(make_grid(16, 8.0));
    CHECK_THROWS_AS(cal.convolve(other), std::invalid_argument);
}

TEST_CASE("multiplier matches the exact symbol away from zero") {
    const GridSpec g = make_grid(16, 4.0);
    const RieszOperator op(g, 1.5);
    const int m = op.padded_n();
    const double period = m * g.spacing();
    // bin (3, 0, 1)
    const std::size_t idx = (static_cast<std::size_t>(3) * m + 0) * (m / 2 + 1) + 1;
    const double xi = std::sqrt(10.0) / period;
    CHECK(op.multiplier()[idx] == doctest::Approx(std::pow(2 * pi * xi, -1.5)).epsilon(1e-14));
}

TEST_CASE("dilation scaling laws") {
    auto gaussian = [](const GridSpec& g) {
        return ScalarField::from_function(g, [](const Vec3& x) {
            return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 8.0);
        });
    };
    const GridSpec g = make_grid(64, 16.0);
    const ScalarField u = gaussian(g);
    CHECK(l2_norm(dilate(u, 1.0) - u) == 0.0);
    CHECK_THROWS_AS(dilate(u, 0.0), std::invalid_argument);

    auto check_laws = [](const ScalarField& f, double t, Interpolation interp) {
        const ScalarField d = dilate(f, t, interp);
        CHECK(std::abs(inner(d, d) / (t * t * t * inner(f, f)) - 1.0) <= 1e-3);
        CHECK(std::abs(dirichlet_energy(d) / (t * dirichlet_energy(f)) - 1.0) <= 1e-3);
    };
    // trigonometric resampling is exact at h = sigma / 4
    for (double t : {0.8, 1.3, 1.6}) check_laws(u, t, Interpolation::spectral);
    // trilinear is second order: halving h cuts the mass-law error about four times
    auto linear_error = [&](int n) {
        const ScalarField f = gaussian(make_grid(n, 12.0));
        const ScalarField d = dilate(f, 1.3, Interpolation::linear);
        return std::abs(inner(d, d) / (1.3 * 1.3 * 1.3 * inner(f, f)) - 1.0);
    };
    const double ratio = linear_error(64) / linear_error(128);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("translation") {
    const GridSpec g = make_grid(32, 8.0);
    std::mt19937_64 rng(5);
    const ScalarField u = testing::random_bumps(g, rng, 2);
    CHECK(l2_norm(translate(u, {0, 0, 0}) - u) == 0.0);
    CHECK(l2_norm(translate(u, {2 * g.half_length(), 0, 0}) - u) == 0.0);
    const ScalarField s = translate(u, {0.37, -1.21, 2.9});
    CHECK(std::abs(l2_norm(s) - l2_norm(u)) <= 1e-6 * l2_norm(u));
    // whole-node shift moves values exactly
    const ScalarField w = translate(u, {g.spacing(), 0, 0});
    CHECK(w.at(5, 3, 4) == u.at(4, 3, 4));
}

TEST_CASE("field dump round trip") {
    const GridSpec g = make_grid(16, 3.25);
    std::mt19937_64 rng(9);
    const ScalarField u = testing::random_noise(g, rng);
    std::stringstream ss;
    write_field(ss, u);
    const std::string text = ss.str();
    CHECK(text.rfind("CHQ1 n=16 L=3.25 order=row-major endian=little dtype=f64\n", 0) == 0);
    CHECK(text.size() == field_header(g).size() + 1 + 8 * g.size());
    const ScalarField back = read_field(ss);
    CHECK(back.grid() == g);
    CHECK(l2_norm(back - u) == 0.0);
    std::stringstream bad("CHQ2 n=16 L=1\n");
    CHECK_THROWS(read_field(bad));
}
