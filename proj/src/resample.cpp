#include "choquard/resample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace choquard {

namespace {

struct Entry {
    int col;
    double w;
};
using Operator1d = std::vector<std::vector<Entry>>;

// Periodic trigonometric cardinal function of an even-length grid, offset d in grid units.
double periodic_sinc(double d, int n) {
    const double pi = std::numbers::pi;
    const double r = std::remainder(d, double(n));
    if (std::abs(r) < 1e-13) return 1.0;
    return std::sin(pi * d) / (n * std::tan(pi * d / n));
}

// Row j samples the (non-periodic, zero-extended) field at grid coordinate s_j.
Operator1d resample_operator(const std::vector<double>& s, int n, Interpolation interp) {
    Operator1d op(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double sj = s[j];
        if (!(sj > -1.0 && sj < n)) continue;
        if (interp == Interpolation::linear) {
            const double f0 = std::floor(sj);
            const int j0 = static_cast<int>(f0);
            const double frac = sj - f0;
            if (j0 >= 0 && frac < 1.0) op[j].push_back({j0, 1.0 - frac});
            if (j0 + 1 < n && frac > 0.0) op[j].push_back({j0 + 1, frac});
        } else {
            if (sj < 0.0) continue;  // outside [-L, L)
            op[j].reserve(n);
            for (int c = 0; c < n; ++c) op[j].push_back({c, periodic_sinc(sj - c, n)});
        }
    }
    return op;
}

ScalarField apply_axis(const ScalarField& u, const Operator1d& op, int axis) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    ScalarField out(g);
    std::vector<double> line(n), res(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto idx = [&](int c) {
                switch (axis) {
                    case 0: return g.index(c, a, b);
                    case 1: return g.index(a, c, b);
                    default: return g.index(a, b, c);
                }
            };
            for (int c = 0; c < n; ++c) line[c] = u[idx(c)];
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (const Entry& e : op[j]) acc += e.w * line[e.col];
                res[j] = acc;
            }
            for (int c = 0; c < n; ++c) out[idx(c)] = res[c];
        }
    return out;
}

}  // namespace

ScalarField dilate(const ScalarField& u, double t, Interpolation interp) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("dilation factor must be positive");
    if (t == 1.0) return u;
    const GridSpec& g = u.grid();
    const int n = g.n();
    const double h = g.spacing();
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = (g.coord(j) / t + g.half_length()) / h;
    const Operator1d op = resample_operator(s, n, interp);
    ScalarField out = apply_axis(u, op, 0);
    out = apply_axis(out, op, 1);
    return apply_axis(out, op, 2);
}

ScalarField translate(const ScalarField& u, const Vec3& shift, Interpolation interp) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    const double h = g.spacing();
    ScalarField out = u;
    for (int axis = 0; axis < 3; ++axis) {
        if (!std::isfinite(shift[axis])) throw std::invalid_argument("translate: non-finite shift");
        const double nodes = shift[axis] / h;
        const double whole = std::round(nodes);
        const double frac = nodes - whole;
        const long roll = static_cast<long>(whole);
        Operator1d op(n);
        for (int j = 0; j < n; ++j) {
            // out[j] = in[j - roll - frac], periodic
            const long base = ((j - roll) % n + n) % n;
            if (frac == 0.0) {
                op[j].push_back({static_cast<int>(base), 1.0});
            } else if (interp == Interpolation::linear) {
                const int lo = static_cast<int>((base - 1 + n) % n);
                // frac in (-1/2, 1/2]: sample between base-1 and base or base and base+1
                if (frac > 0.0) {
                    op[j].push_back({lo, frac});
                    op[j].push_back({static_cast<int>(base), 1.0 - frac});
                } else {
                    op[j].push_back({static_cast<int>(base), 1.0 + frac});
                    op[j].push_back({static_cast<int>((base + 1) % n), -frac});
                }
            } else {
                for (int c = 0; c < n; ++c)
                    op[j].push_back({c, periodic_sinc(double(base) - frac - c, n)});
            }
        }
        out = apply_axis(out, op, axis);
    }
    return out;
}

}  // namespace choquard
