#pragma once

#include <string>

#include "choquard/grid.hpp"

namespace choquard {

/// The pair (f, F = integral of f) with f(t) = 0 for t <= 0.
class Nonlinearity {
public:
    enum class Kind { power, bl_demo };

    /// F(s) = s_+^p / p, f(s) = s_+^(p-1).
    static Nonlinearity power(double p);
    /// f(s) = s_+^3 / (1 + s_+^2): not monotone in f(s)/s^q for any fixed q.
    static Nonlinearity bl_demo();

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    std::string name() const;

    double f(double s) const;
    double F(double s) const;
    /// f'(s), used by the Newton linearization.
    double df(double s) const;

    /// Growth exponent q with f(s) ~ s^(q-1) for large s, used by the stabilized
    /// source iteration (q = p for power).
    double effective_power() const;

private:
    Kind kind_ = Kind::power;
    double p_ = 3.0;
};

ScalarField eval_f(const Nonlinearity& nl, const ScalarField& u);
ScalarField eval_F(const Nonlinearity& nl, const ScalarField& u);
ScalarField eval_df(const Nonlinearity& nl, const ScalarField& u);

/// Numerical checks of the Berestycki-Lions type hypotheses at N = 3.
struct NonlinearityReport {
    bool f1_small_t = false;   // f(t)/t decreasing toward 0 at t = 1e-3, 1e-4, 1e-5
    bool f2_large_t = false;   // f(t)/t^(alpha+2) decreasing toward 0 at t = 1e2, 1e3, 1e4
    bool f3_positive = false;  // some s0 with F(s0) > 0
    double s0 = 0.0;
    bool ok() const { return f1_small_t && f2_large_t && f3_positive; }
};

NonlinearityReport check_hypotheses(const Nonlinearity& nl, double alpha);

}  // namespace choquard
