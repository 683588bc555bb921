#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "choquard/diagnostics.hpp"
#include "choquard/riesz.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace choquard;
using std::numbers::pi;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

big hls_bound_mp(const big& s, const big& r, const big& alpha) {
    const big N = 3;
    const big e = 1 - alpha / N;
    const big sphere = 4 * boost::math::constants::pi<big>();
    return N / (s * r * alpha) * pow(sphere / N, e) *
           (pow(e / (1 - 1 / s), e) + pow(e / (1 - 1 / r), e));
}

ScalarField gaussian(const GridSpec& g, const Vec3& c, double sigma, double mass) {
    const double norm = mass / std::pow(2.0 * pi * sigma * sigma, 1.5);
    return ScalarField::from_function(g, [&](const Vec3& x) {
        const double d = distance(x, c);
        return norm * std::exp(-0.5 * d * d / (sigma * sigma));
    });
}

// E|X - Y|^(alpha-3) for X ~ N(a, s1^2 I), Y ~ N(b, s2^2 I), times the masses
double gaussian_pair_oracle(const Vec3& a, const Vec3& b, double s1, double s2, double alpha) {
    const double m = distance(a, b);
    const double s = std::sqrt(s1 * s1 + s2 * s2);
    auto density = [&](double r) {
        return r / (m * s * std::sqrt(2.0 * pi)) *
               (std::exp(-(r - m) * (r - m) / (2 * s * s)) - std::exp(-(r + m) * (r + m) / (2 * s * s)));
    };
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(
        [&](double r) { return std::pow(r, alpha - 3.0) * density(r); }, 0.0, m + 12.0 * s, 15, 1e-12);
}

}  // namespace

TEST_CASE("HLS constant bound") {
    CHECK(std::abs(hls_constant_bound(1.2, 1.2, 2.0) - 4.231) <= 1e-3);
    const double closed = 25.0 / 24.0 * std::cbrt(4.0 * pi / 3.0) * 2.0 * std::cbrt(2.0);
    CHECK(hls_constant_bound(1.2, 1.2, 2.0) == doctest::Approx(closed).epsilon(1e-14));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(0.1, 2.9), uu(0.02, 0.98);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = ua(rng);
        // 1/s spans (alpha/3, 1) so that both exponents exceed 1
        const double inv_s = alpha / 3.0 + uu(rng) * (1.0 - alpha / 3.0);
        const double s = 1.0 / inv_s;
        const double r = 1.0 / (1.0 + alpha / 3.0 - inv_s);
        const double value = hls_constant_bound(s, r, alpha);
        const big ref = hls_bound_mp(big(s), big(r), big(alpha));
        CHECK(std::abs(value / static_cast<double>(ref) - 1.0) <= 1e-12);
        CHECK(hls_constant_bound(r, s, alpha) == doctest::Approx(value).epsilon(1e-14));
    }
    CHECK_THROWS_AS(hls_constant_bound(1.2, 1.3, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(hls_constant_bound(1.0, 3.0 / 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hls_constant_bound(1.2, 1.2, 3.0), std::invalid_argument);
}

TEST_CASE("HLS bilinear form against point masses") {
    const GridSpec g = make_grid(64, 12.0);
    for (double alpha : {1.0, 2.0}) {
        const RieszOperator op(g, alpha);
        const double d = 6.0;
        const ScalarField f = gaussian(g, {-d / 2, 0.0, 0.0}, 0.6, 1.0);
        const ScalarField h = gaussian(g, {d / 2, 0.0, 0.0}, 0.6, 1.0);
        const HlsCheck c = hls_check(f, h, 3.0 / (3.0 + alpha) * 2.0, 3.0 / (3.0 + alpha) * 2.0, op);
        CHECK_FALSE(c.boundary_warning);
        CHECK(std::abs(c.lhs / std::pow(d, alpha - 3.0) - 1.0) <= 0.05);
        CHECK(c.ok());
    }
    const RieszOperator op(g, 2.0);
    const ScalarField zero(g);
    const HlsCheck c0 = hls_check(zero, gaussian(g, {}, 1.0, 1.0), 1.2, 1.2, op);
    CHECK(c0.lhs == 0.0);
    CHECK(c0.ok());
}

TEST_CASE("HLS spectral route matches direct summation") {
    const GridSpec g = make_grid(16, 6.0);
    for (double alpha : {0.8, 2.0, 2.6}) {
        const RieszOperator op(g, alpha);
        const ScalarField f = gaussian(g, {-0.8, 0.3, 0.0}, 1.0, 1.0);
        const ScalarField h = gaussian(g, {0.6, -0.2, 0.5}, 0.9, 2.0);
        const double s = 2.0 / (1.0 + alpha / 3.0);
        const double spectral = hls_check(f, h, s, s, op).lhs;
        const double direct = hls_lhs_direct(f, h, alpha);
        const double exact = 2.0 * gaussian_pair_oracle({-0.8, 0.3, 0.0}, {0.6, -0.2, 0.5}, 1.0, 0.9, alpha);
        CHECK(std::abs(spectral / direct - 1.0) <= 0.02);
        CHECK(std::abs(direct / exact - 1.0) <= 0.01);
        CHECK(std::abs(spectral / exact - 1.0) <= 0.015);
    }
}

TEST_CASE("HLS inequality on random bump pairs") {
    const GridSpec g = make_grid(32, 8.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(0.3, 2.7), uu(0.05, 0.95);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = trial % 2 == 0 ? 2.0 : ua(rng);
        const double inv_s = alpha / 3.0 + uu(rng) * (1.0 - alpha / 3.0);
        const double s = trial % 2 == 0 ? 1.2 : 1.0 / inv_s;
        const double r = 1.0 / (1.0 + alpha / 3.0 - 1.0 / s);
        const RieszOperator op(g, alpha);
        const ScalarField f = testing::random_bumps(g, rng, 1 + trial % 3);
        const ScalarField h = testing::random_bumps(g, rng, 1 + (trial / 3) % 3);
        const HlsCheck c = hls_check(f, h, s, r, op);
        CHECK(c.lhs > 0.0);
        CHECK(c.ok());
    }
}

TEST_CASE("decay fit") {
    const GridSpec g = make_grid(64, 16.0);
    const auto expo = ScalarField::from_function(g, [](const Vec3& x) { return std::exp(-norm(x)); });
    const DecayFit fit = decay_fit(expo, {{0.0, 0.0, 0.0}});
    CHECK(fit.r1 == 4.0);
    CHECK(fit.r2 == 8.0);
    CHECK(fit.samples >= 50);
    CHECK(std::abs(fit.rate - 1.0) <= 0.02);
    CHECK(std::abs(fit.prefactor - 1.0) <= 0.05);

    ScalarField big = expo;
    big *= 10.0;
    const DecayFit f10 = decay_fit(big, {{0.0, 0.0, 0.0}});
    CHECK(f10.rate == doctest::Approx(fit.rate).epsilon(1e-10));
    CHECK(f10.prefactor == doctest::Approx(10.0 * fit.prefactor).epsilon(1e-10));

    // translate field and center together by whole nodes
    const Vec3 shift{2.0, -1.5, 0.5};
    const auto moved = ScalarField::from_function(g, [&](const Vec3& x) { return std::exp(-distance(x, shift)); });
    const DecayFit fm = decay_fit(moved, {shift});
    CHECK(std::abs(fm.rate / fit.rate - 1.0) <= 1e-10);
    CHECK(std::abs(fm.prefactor / fit.prefactor - 1.0) <= 1e-10);

    // two centers use the distance to the nearer one
    const Vec3 c1{-3.0, 0.0, 0.0}, c2{3.0, 0.0, 0.0};
    const auto two = ScalarField::from_function(g, [&](const Vec3& x) {
        return 2.0 * std::exp(-1.5 * std::min(distance(x, c1), distance(x, c2)));
    });
    const DecayFit f2 = decay_fit(two, {c1, c2}, 2.0, 6.0);
    CHECK(f2.rate == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(f2.prefactor == doctest::Approx(2.0).epsilon(1e-10));

    CHECK_THROWS_AS(decay_fit(expo, {{0.0, 0.0, 0.0}}, 4.0, 4.02), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit(expo, {{0.0, 0.0, 0.0}}, 4.0, 12.0), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit(ScalarField(g, -1.0), {{0.0, 0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("symmetry report") {
    const GridSpec g = make_grid(32, 8.0);
    const auto radial = ScalarField::from_function(g, [](const Vec3& x) {
        const double r = norm(x);
        return 1.0 / (1.0 + r * r) * std::exp(-0.3 * r);
    });
    const SymmetryReport rep = symmetry_report(radial);
    CHECK(rep.max_deviation <= 1e-6);
    CHECK(rep.monotonicity_violations == 0);

    ScalarField lopsided = radial;
    lopsided += ScalarField::from_function(g, [](const Vec3& x) {
        return 0.8 * std::exp(-distance(x, {3.0, 1.0, 0.0}) * distance(x, {3.0, 1.0, 0.0}));
    });
    const SymmetryReport bad = symmetry_report(lopsided);
    CHECK(bad.max_deviation > 0.1);
    CHECK(bad.monotonicity_violations > 0);

    // recentering a shifted radial profile restores the symmetry
    const auto off = ScalarField::from_function(g, [](const Vec3& x) {
        return std::exp(-0.5 * distance(x, {1.5, -2.0, 0.5}) * distance(x, {1.5, -2.0, 0.5}));
    });
    CHECK(symmetry_report(off).max_deviation > 0.1);
    CHECK(symmetry_report(recenter_on_max(off)).max_deviation <= 1e-8);
}
