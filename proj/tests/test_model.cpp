#include <cmath>
#include <numbers>
#include <random>

#include "choquard/functionals.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/potential.hpp"
#include "choquard/riesz.hpp"
#include "choquard/spectral.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace choquard;
using std::numbers::pi;

namespace {

double directional_fd(const auto& energy, const ScalarField& u, const ScalarField& phi, double h) {
    ScalarField up = u, um = u;
    up.axpy(h, phi);
    um.axpy(-h, phi);
    return (energy(up) - energy(um)) / (2.0 * h);
}

ScalarField unit_direction(const GridSpec& g, std::mt19937_64& rng) {
    ScalarField phi = testing::random_bumps(g, rng, 2);
    ScalarField noise = testing::random_bumps(g, rng, 1);
    phi.axpy(-0.7, noise);
    phi *= 1.0 / l2_norm(phi);
    return phi;
}

}  // namespace

TEST_CASE("nonlinearity pointwise values") {
    const Nonlinearity p2 = Nonlinearity::power(2.0);
    const GridSpec g = make_grid(16, 4.0);
    const ScalarField two(g, 2.0);
    CHECK(eval_f(p2, two).max_abs() == doctest::Approx(2.0));
    CHECK(eval_F(p2, two).max_abs() == doctest::Approx(2.0));

    for (const Nonlinearity& nl : {Nonlinearity::power(2.5), Nonlinearity::bl_demo()}) {
        const ScalarField neg(g, -1.5);
        CHECK(eval_f(nl, neg).max_abs() == 0.0);
        CHECK(eval_F(nl, neg).max_abs() == 0.0);
        CHECK(nl.f(0.0) == 0.0);
        for (double s : {0.5, 1.0, 2.0}) {
            const double h = 1e-5;
            const double fd = (nl.F(s + h) - nl.F(s - h)) / (2.0 * h);
            CHECK(std::abs(fd / nl.f(s) - 1.0) <= 1e-6);
            const double dfd = (nl.f(s + h) - nl.f(s - h)) / (2.0 * h);
            CHECK(std::abs(dfd / nl.df(s) - 1.0) <= 1e-6);
        }
    }
    CHECK_THROWS_AS(Nonlinearity::power(1.0), std::invalid_argument);
}

TEST_CASE("nonlinearity hypotheses") {
    for (double alpha : {0.5, 1.0, 2.0, 2.5}) {
        for (double p : {2.2, 2.5, 0.5 * (2.0 + 3.0 + alpha)}) {
            const NonlinearityReport rep = check_hypotheses(Nonlinearity::power(p), alpha);
            CHECK(rep.ok());
            CHECK(Nonlinearity::power(p).F(rep.s0) > 0.0);
        }
        CHECK(check_hypotheses(Nonlinearity::bl_demo(), alpha).ok());
        // supercritical and critical powers
        CHECK_FALSE(check_hypotheses(Nonlinearity::power(alpha + 3.5), alpha).f2_large_t);
        CHECK_FALSE(check_hypotheses(Nonlinearity::power(alpha + 3.0), alpha).f2_large_t);
    }
    // f(t)/t constant: fails the small-t condition
    CHECK_FALSE(check_hypotheses(Nonlinearity::power(2.0), 2.0).f1_small_t);
    CHECK_FALSE(check_hypotheses(Nonlinearity::power(1.5), 2.0).f1_small_t);
}

TEST_CASE("potential presets satisfy the well conditions") {
    const PotentialSpec single = PotentialSpec::single_well();
    const PotentialSpec dbl = PotentialSpec::double_well(6.0, 2.0, 1.0, 1.2);
    const PotentialSpec tri = PotentialSpec::triple_well(6.0, 2.0, 1.0, 1.1, 1.3);
    for (const PotentialSpec* pot : {&single, &dbl, &tri}) {
        const PotentialReport rep = check_potential(*pot);
        CHECK(rep.ok());
        CHECK(rep.sampled_min == doctest::Approx(1.0).epsilon(1e-6));
        for (std::size_t i = 0; i < pot->size(); ++i) {
            const Well& w = pot->wells()[i];
            CHECK((*pot)(w.center) == doctest::Approx(w.depth));
            CHECK(rep.boundary_min[i] > w.depth);
            CHECK(pot->well_index(w.center) == static_cast<int>(i));
        }
        CHECK((*pot)({100.0, 100.0, 100.0}) == doctest::Approx(2.0));
    }
    CHECK(dbl.min_well_gap() == doctest::Approx(2.0));
    CHECK(dbl.dist_minima_to_complement() == doctest::Approx(2.0));
    CHECK(dbl.well_index({0.0, 0.0, 0.0}) == -1);
}

TEST_CASE("broken potential fixtures are rejected") {
    // overlapping wells
    const PotentialSpec overlap({Well{{-1.0, 0.0, 0.0}, 2.0, 1.0}, Well{{1.0, 0.0, 0.0}, 2.0, 1.2}});
    CHECK_FALSE(check_potential(overlap).v2_wells);
    // floor never reached
    const PotentialSpec high({Well{{0.0, 0.0, 0.0}, 2.0, 1.5}});
    CHECK_FALSE(check_potential(high).v1_floor);
    // well minimum not below its boundary values
    const PotentialSpec flat({Well{{0.0, 0.0, 0.0}, 2.0, 2.0}});
    CHECK_FALSE(check_potential(flat).ok());
    CHECK_THROWS_AS(PotentialSpec({Well{{0.0, 0.0, 0.0}, -1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("penalization weight") {
    const PotentialSpec pot = PotentialSpec::single_well(2.0, 1.0);
    const PenalizationSpec pen{0.5, 2.0, 1.0};
    const GridSpec g = make_grid(32, 8.0);
    const ScalarField chi = build_chi(g, pot, pen);
    // x = 0 maps into the well, x = (7,0,0) maps to (3.5,0,0) outside
    CHECK(chi.at(16, 16, 16) == 0.0);
    CHECK(chi.at(30, 16, 16) == doctest::Approx(4.0));

    PenalizationSpec bad = pen;
    bad.mu = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = pen;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    // |O_eps| = eps^-3 |O|, counted on a grid that resolves the ball
    const GridSpec fine = make_grid(64, 6.0);
    const double ball = 4.0 / 3.0 * pi * 8.0;
    for (double eps : {1.0, 0.5}) {
        const ScalarField c = build_chi(fine, pot, {eps, 2.0, 1.0});
        double inside = 0.0;
        for (double v : c.values()) inside += v == 0.0 ? fine.cell_volume() : 0.0;
        CHECK(std::abs(inside / (ball / (eps * eps * eps)) - 1.0) <= 0.03);
    }

    const PotentialSpec dbl = PotentialSpec::double_well(6.0, 2.0, 1.0, 1.2);
    const ScalarField chi0 = build_chi_i(g, dbl, {1.0, 2.0, 1.0}, 0);
    const ScalarField chi1 = build_chi_i(g, dbl, {1.0, 2.0, 1.0}, 1);
    const ScalarField chi_all = build_chi(g, dbl, {1.0, 2.0, 1.0});
    CHECK(chi0.at(g.center() - 6, 16, 16) == 0.0);
    CHECK(chi1.at(g.center() - 6, 16, 16) == 1.0);
    CHECK(chi_all.at(g.center() + 6, 16, 16) == 0.0);
    CHECK_THROWS_AS(build_chi_i(g, dbl, {1.0, 2.0, 1.0}, 2), std::out_of_range);
}

TEST_CASE("limit energy basics") {
    const GridSpec g = make_grid(32, 8.0);
    const RieszOperator riesz(g, 2.0);
    const Nonlinearity nl = Nonlinearity::power(2.5);
    const ScalarField zero(g);
    CHECK(energy_limit(zero, 1.0, nl, riesz) == 0.0);
    CHECK(grad_limit(zero, 1.0, nl, riesz).max_abs() == 0.0);
    const PohozaevTerms pz = pohozaev(zero, 1.0, nl, riesz);
    CHECK(pz.P == 0.0);
    CHECK(pz.relative() == 0.0);

    std::mt19937_64 rng(3);
    ScalarField neg = testing::random_bumps(g, rng, 2);
    neg *= -1.0;
    const double quad = 0.5 * (dirichlet_energy(neg) + 1.3 * inner(neg, neg));
    CHECK(energy_limit(neg, 1.3, nl, riesz) == doctest::Approx(quad).epsilon(1e-12));

    const ScalarField bump = testing::random_bumps(g, rng, 2);
    CHECK(std::abs(pohozaev(bump, 1.0, nl, riesz).P) > 1e-6);
    CHECK_THROWS_AS(energy_limit(bump, 0.0, nl, riesz), std::invalid_argument);
}

TEST_CASE("limit gradient matches finite differences") {
    const GridSpec g = make_grid(32, 8.0);
    std::mt19937_64 rng(20);
    for (const Nonlinearity& nl : {Nonlinearity::power(2.5), Nonlinearity::bl_demo()}) {
        const RieszOperator riesz(g, 1.5);
        const double a = 1.2;
        const ScalarField u = testing::random_bumps(g, rng, 3);
        const ScalarField grad = grad_limit(u, a, nl, riesz);
        auto energy = [&](const ScalarField& w) { return energy_limit(w, a, nl, riesz); };
        for (int d = 0; d < 10; ++d) {
            const ScalarField phi = unit_direction(g, rng);
            const double fd = directional_fd(energy, u, phi, 1e-5);
            const double an = inner(grad, phi);
            CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
        }
        // second variation against differences of the gradient
        const ScalarField phi = unit_direction(g, rng);
        ScalarField up = u, um = u;
        up.axpy(1e-5, phi);
        um.axpy(-1e-5, phi);
        ScalarField fd = grad_limit(up, a, nl, riesz) - grad_limit(um, a, nl, riesz);
        fd *= 1.0 / 2e-5;
        const ScalarField hv = hessian_limit(u, phi, a, nl, riesz);
        CHECK(l2_norm(fd - hv) <= 1e-5 * l2_norm(hv));
    }
}

TEST_CASE("penalized energy report and gradient") {
    const GridSpec g = make_grid(32, 8.0);
    const RieszOperator riesz(g, 2.0);
    const Nonlinearity nl = Nonlinearity::power(2.5);
    const PotentialSpec pot = PotentialSpec::double_well(6.0, 2.0, 1.0, 1.2);
    const PenalizationSpec pen{0.5, 2.0, 1.0};
    const PenalizedFunctional fn(g, pot, pen, nl, riesz);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        ScalarField u = testing::random_bumps(g, rng, 3);
        u *= 0.8 + trial;
        const EnergyReport r = fn.energy(u);
        const double rebuilt = 0.5 * (r.kinetic + r.potential) - 0.5 * r.nonlocal + r.penalty;
        CHECK(std::abs(r.total - rebuilt) <= 1e-12 * std::abs(r.total));
        CHECK(r.unpenalized() == doctest::Approx(r.total - r.penalty));
        if (trial == 2) CHECK(r.penalty > 0.0);

        const ScalarField grad = fn.gradient(u);
        auto energy = [&](const ScalarField& w) { return fn.energy(w).total; };
        for (int d = 0; d < 10; ++d) {
            const ScalarField phi = unit_direction(g, rng);
            const double fd = directional_fd(energy, u, phi, 1e-5);
            const double an = inner(grad, phi);
            CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
        }
        const ScalarField phi = unit_direction(g, rng);
        ScalarField up = u, um = u;
        up.axpy(1e-5, phi);
        um.axpy(-1e-5, phi);
        ScalarField fd = fn.gradient(up) - fn.gradient(um);
        fd *= 1.0 / 2e-5;
        const ScalarField hv = fn.hessian(u, phi);
        CHECK(l2_norm(fd - hv) <= 1e-5 * l2_norm(hv));
    }

    const ScalarField u = testing::random_bumps(g, rng, 2);
    const ScalarField a = grad_penalized(u, pot, pen, nl, riesz);
    CHECK(l2_norm(a - fn.gradient(u)) == 0.0);
    CHECK(energy_penalized(u, pot, pen, nl, riesz).total == fn.energy(u).total);
}

TEST_CASE("penalty is inactive inside the wells") {
    const GridSpec g = make_grid(32, 8.0);
    const RieszOperator riesz(g, 2.0);
    const Nonlinearity nl = Nonlinearity::power(2.5);
    const PotentialSpec pot = PotentialSpec::single_well(2.0, 1.0);
    const PenalizationSpec pen{0.5, 2.0, 1.0};
    const PenalizedFunctional fn(g, pot, pen, nl, riesz);

    // compact bump inside O_eps (radius 4 after rescaling)
    const ScalarField u = ScalarField::from_function(g, [](const Vec3& x) {
        const double r = norm(x);
        return r < 3.0 ? 2.0 * std::pow(std::cos(pi * r / 6.0), 4) : 0.0;
    });
    const EnergyReport r = fn.energy(u);
    CHECK(r.chi_mass == 0.0);
    CHECK(r.penalty == 0.0);
    CHECK(r.total == r.unpenalized());

    // gradient equals that of P_eps: -Delta u + V_eps u - (I * F(u)) f(u)
    ScalarField expected = laplacian(u);
    expected *= -1.0;
    expected += hadamard(fn.scaled_potential(), u);
    expected -= hadamard(riesz.convolve(eval_F(nl, u)), eval_f(nl, u));
    CHECK(l2_norm(fn.gradient(u) - expected) <= 1e-12 * l2_norm(expected));

    // chi-weighted mass of 3 gives Q = 4
    const ScalarField outside = ScalarField::from_function(g, [](const Vec3& x) {
        return std::exp(-0.5 * (std::pow(x[0] - 6.0, 2) + x[1] * x[1] + x[2] * x[2]));
    });
    ScalarField w = outside;
    w *= std::sqrt(3.0 / inner(hadamard(fn.chi(), outside), outside));
    CHECK(fn.energy(w).penalty == doctest::Approx(4.0).epsilon(1e-12));

    // penalty term of the gradient is a nonnegative multiple of u
    const ScalarField gw = fn.gradient(w);
    const ScalarField gw_off = PenalizedFunctional(g, pot, {0.5, 2.0, 1e9}, nl, riesz).gradient(w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double extra = gw[i] - gw_off[i];
        CHECK(extra * w[i] >= -1e-14);
        if (fn.chi()[i] == 0.0) CHECK(std::abs(extra) <= 1e-12);
    }

    // monotone under amplification
    double last = -1.0;
    for (double c : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        ScalarField s = w;
        s *= c;
        const double q = fn.energy(s).penalty;
        CHECK(q >= last);
        last = q;
    }
}
