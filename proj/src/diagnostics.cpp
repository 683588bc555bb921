#include "choquard/diagnostics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace choquard {

double hls_constant_bound(double s, double r, double alpha) {
    if (!(s > 1.0) || !(r > 1.0)) throw std::invalid_argument("HLS exponents must exceed 1");
    if (!(alpha > 0.0 && alpha < 3.0)) throw std::invalid_argument("alpha must lie in (0, 3)");
    const double target = 1.0 + alpha / 3.0;
    if (std::abs(1.0 / s + 1.0 / r - target) > 1e-12 * target)
        throw std::invalid_argument("HLS exponents violate 1/s + 1/r = 1 + alpha/3");
    constexpr double N = 3.0;
    const double e = 1.0 - alpha / N;
    const double sphere = 4.0 * std::numbers::pi;
    const double bracket = std::pow(e / (1.0 - 1.0 / s), e) + std::pow(e / (1.0 - 1.0 / r), e);
    return N / (s * r * alpha) * std::pow(sphere / N, e) * bracket;
}

double lebesgue_norm(const ScalarField& u, double q) {
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::abs(v), q);
    return std::pow(sum * u.grid().cell_volume(), 1.0 / q);
}

HlsCheck hls_check(const ScalarField& f, const ScalarField& g, double s, double r,
                   const RieszOperator& op) {
    require_same_grid(f, g, "hls");
    HlsCheck c;
    c.s = s;
    c.r = r;
    c.alpha = op.alpha();
    c.bound = hls_constant_bound(s, r, c.alpha) * lebesgue_norm(f, s) * lebesgue_norm(g, r);
    const RieszResult conv = riesz_convolve(op, f);
    c.boundary_warning = conv.decay_warning || !op.free_space_valid(g);
    c.lhs = inner(conv.value, g) / riesz_kernel_constant(c.alpha);
    return c;
}

namespace {

// Mean of |x|^(alpha-3) over the cell of side h centered at offset (i, j, k) h.
template <int Points>
double cell_average(double alpha, double h, int i, int j, int k) {
    using rule = boost::math::quadrature::gauss<double, Points>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    // the rule stores the nonnegative half of a symmetric set on [-1, 1]
    std::vector<std::pair<double, double>> pts;
    for (std::size_t q = 0; q < x.size(); ++q) {
        pts.emplace_back(0.5 * x[q], 0.5 * w[q]);
        if (x[q] != 0.0) pts.emplace_back(-0.5 * x[q], 0.5 * w[q]);
    }
    double acc = 0.0;
    for (const auto& [a, wa] : pts)
        for (const auto& [b, wb] : pts)
            for (const auto& [c, wc] : pts) {
                const double r = h * std::sqrt((i + a) * (i + a) + (j + b) * (j + b) + (k + c) * (k + c));
                acc += wa * wb * wc * std::pow(r, alpha - 3.0);
            }
    return acc;
}

}  // namespace

double hls_lhs_direct(const ScalarField& f, const ScalarField& g, double alpha) {
    require_same_grid(f, g, "hls");
    const GridSpec& grid = f.grid();
    const int n = grid.n();
    const double h = grid.spacing();
    const double self = std::pow(h, alpha - 3.0) * unit_cube_kernel_integral(alpha);
    // cell-averaged kernel by index offset; the singular cell is exact
    const int m = 2 * n - 1;
    std::vector<double> kernel(std::size_t(m) * m * m);
    for (int di = 0; di < m; ++di)
        for (int dj = 0; dj < m; ++dj)
            for (int dk = 0; dk < m; ++dk) {
                const int oi = di - n + 1, oj = dj - n + 1, ok = dk - n + 1;
                const int reach = std::max({std::abs(oi), std::abs(oj), std::abs(ok)});
                double kv = self;
                if (reach > 4)
                    kv = cell_average<4>(alpha, h, oi, oj, ok);
                else if (reach > 0)
                    kv = cell_average<12>(alpha, h, oi, oj, ok);
                kernel[(std::size_t(di) * m + dj) * m + dk] = kv;
            }
    // against cell means, a node value carries a -h^2/24 Delta g error
    ScalarField gc = g;
    auto at = [&](int i, int j, int k) {
        return i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n ? 0.0 : g.at(i, j, k);
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double lap = at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k) +
                                   at(i, j, k + 1) + at(i, j, k - 1) - 6.0 * g.at(i, j, k);
                gc.at(i, j, k) -= lap / 24.0;
            }
    const double self_moment =
        std::pow(h, alpha - 3.0) * (unit_cube_kernel_integral(alpha + 2.0) / 6.0 + unit_cube_kernel_integral(alpha) / 24.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double fx = f.at(i, j, k);
                if (fx == 0.0) continue;
                double acc = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        const double* krow =
                            &kernel[(std::size_t(a - i + n - 1) * m + (b - j + n - 1)) * m + (n - 1 - k)];
                        const double* grow = &gc.values()[grid.index(a, b, 0)];
                        for (int c = 0; c < n; ++c) acc += krow[c] * grow[c];
                    }
                // exact second moment of the singular cell replaces its constant-kernel estimate
                const double lap = at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k) +
                                   at(i, j, k + 1) + at(i, j, k - 1) - 6.0 * g.at(i, j, k);
                total += fx * (acc + lap * self_moment);
            }
    const double w = grid.cell_volume();
    return total * w * w;
}

DecayFit decay_fit(const ScalarField& u, const std::vector<Vec3>& centers, double r1, double r2) {
    if (centers.empty()) throw std::invalid_argument("decay_fit needs at least one center");
    const GridSpec& g = u.grid();
    if (!(r1 >= 0.0 && r2 > r1)) throw std::invalid_argument("decay_fit annulus must satisfy 0 <= r1 < r2");
    if (r2 > 0.5 * g.half_length() * (1.0 + 1e-12))
        throw std::invalid_argument("decay_fit annulus must stay within L/2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                const double v = u.at(i, j, k);
                if (!(v > 0.0)) continue;
                const Vec3 x = g.node(i, j, k);
                double d = std::numeric_limits<double>::infinity();
                for (const Vec3& c : centers) d = std::min(d, distance(x, c));
                if (d < r1 || d > r2) continue;
                pts.push_back({d, std::log(v)});
            }
    if (pts.size() < 50) throw std::invalid_argument("annulus too thin (fewer than 50 usable nodes)");
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double ss = 0.0;
    for (const auto& [x, y] : pts) ss += std::pow(y - (icpt + slope * x), 2);
    DecayFit fit;
    fit.rate = -slope;
    fit.prefactor = std::exp(icpt);
    fit.r1 = r1;
    fit.r2 = r2;
    fit.residual = std::sqrt(ss / m);
    fit.samples = static_cast<int>(pts.size());
    return fit;
}

DecayFit decay_fit(const ScalarField& u, const std::vector<Vec3>& centers) {
    const double L = u.grid().half_length();
    return decay_fit(u, centers, 0.25 * L, 0.5 * L);
}

SymmetryReport symmetry_report(const ScalarField& u) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    const double scale = u.max_abs();
    SymmetryReport rep;
    if (scale == 0.0) return rep;
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    double worst = 0.0;
    for (const auto& p : perms)
        for (int flips = 0; flips < 8; ++flips)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        const std::array<int, 3> src{i, j, k};
                        std::array<int, 3> dst{};
                        for (int ax = 0; ax < 3; ++ax) {
                            const int v = src[p[ax]];
                            dst[ax] = (flips >> ax) & 1 ? (n - v) % n : v;
                        }
                        worst = std::max(worst, std::abs(u.at(i, j, k) - u.at(dst[0], dst[1], dst[2])));
                    }
    rep.max_deviation = worst / scale;

    const int c = g.center();
    const double tol = 1e-5 * scale;  // spectral ripple floor in the tail
    for (int ax = 0; ax < 3; ++ax)
        for (int dir : {-1, 1}) {
            std::array<int, 3> idx{c, c, c};
            double prev = u.at(c, c, c);
            for (int step = 1; step < n / 2; ++step) {
                idx[ax] = c + dir * step;
                const double v = u.at(idx[0], idx[1], idx[2]);
                if (v > prev + tol) ++rep.monotonicity_violations;
                prev = v;
            }
        }
    return rep;
}

ScalarField recenter_on_max(const ScalarField& u) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    const auto it = std::max_element(u.values().begin(), u.values().end());
    const std::size_t idx = static_cast<std::size_t>(it - u.values().begin());
    const int si = g.center() - static_cast<int>(idx / (std::size_t(n) * n));
    const int sj = g.center() - static_cast<int>((idx / n) % n);
    const int sk = g.center() - static_cast<int>(idx % n);
    auto wrap = [n](int v) { return ((v % n) + n) % n; };
    ScalarField out(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out.at(wrap(i + si), wrap(j + sj), wrap(k + sk)) = u.at(i, j, k);
    return out;
}

}  // namespace choquard
