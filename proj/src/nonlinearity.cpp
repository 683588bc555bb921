#include "choquard/nonlinearity.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace choquard {

Nonlinearity Nonlinearity::power(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("power exponent must exceed 1");
    Nonlinearity nl;
    nl.kind_ = Kind::power;
    nl.p_ = p;
    return nl;
}

Nonlinearity Nonlinearity::bl_demo() {
    Nonlinearity nl;
    nl.kind_ = Kind::bl_demo;
    nl.p_ = 4.0;
    return nl;
}

std::string Nonlinearity::name() const {
    return kind_ == Kind::power ? "power(p=" + std::to_string(p_) + ")" : "bl_demo";
}

double Nonlinearity::f(double s) const {
    if (s <= 0.0) return 0.0;
    if (kind_ == Kind::power) return std::pow(s, p_ - 1.0);
    return s * s * s / (1.0 + s * s);
}

double Nonlinearity::F(double s) const {
    if (s <= 0.0) return 0.0;
    if (kind_ == Kind::power) return std::pow(s, p_) / p_;
    return 0.5 * s * s - 0.5 * std::log1p(s * s);
}

double Nonlinearity::df(double s) const {
    if (s <= 0.0) return 0.0;
    if (kind_ == Kind::power) return (p_ - 1.0) * std::pow(s, p_ - 2.0);
    const double s2 = s * s;
    return s2 * (s2 + 3.0) / ((1.0 + s2) * (1.0 + s2));
}

double Nonlinearity::effective_power() const { return kind_ == Kind::power ? p_ : 3.0; }

namespace {
template <class Fn>
ScalarField pointwise(const ScalarField& u, Fn&& fn) {
    ScalarField out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = fn(u[i]);
    return out;
}
}  // namespace

ScalarField eval_f(const Nonlinearity& nl, const ScalarField& u) {
    return pointwise(u, [&](double s) { return nl.f(s); });
}
ScalarField eval_F(const Nonlinearity& nl, const ScalarField& u) {
    return pointwise(u, [&](double s) { return nl.F(s); });
}
ScalarField eval_df(const Nonlinearity& nl, const ScalarField& u) {
    return pointwise(u, [&](double s) { return nl.df(s); });
}

NonlinearityReport check_hypotheses(const Nonlinearity& nl, double alpha) {
    NonlinearityReport rep;
    auto decreasing_to_zero = [](const std::array<double, 3>& r) {
        return r[0] > r[1] && r[1] > r[2] && r[2] >= 0.0 && r[2] < 0.5 * r[0];
    };
    const std::array<double, 3> small{1e-3, 1e-4, 1e-5};
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) r[i] = nl.f(small[i]) / small[i];
    rep.f1_small_t = decreasing_to_zero(r);

    // (alpha + 2) / (N - 2) with N = 3
    const std::array<double, 3> large{1e2, 1e3, 1e4};
    for (int i = 0; i < 3; ++i) r[i] = nl.f(large[i]) / std::pow(large[i], alpha + 2.0);
    rep.f2_large_t = decreasing_to_zero(r);

    for (double s = 0.01; s <= 100.0; s *= 1.1) {
        if (nl.F(s) > 0.0) {
            rep.f3_positive = true;
            rep.s0 = s;
            break;
        }
    }
    return rep;
}

}  // namespace choquard
