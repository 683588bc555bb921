#include "choquard/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace choquard {

double bump_profile(double s) {
    s = std::abs(s);
    if (s >= 1.0) return 0.0;
    const double s4 = s * s * s * s;
    return std::exp(1.0 - 1.0 / (1.0 - s4));
}

PotentialSpec::PotentialSpec(std::vector<Well> wells) : wells_(std::move(wells)) {
    if (wells_.empty()) throw std::invalid_argument("potential needs at least one well");
    for (const Well& w : wells_) {
        if (!(w.radius > 0.0)) throw std::invalid_argument("well radius must be positive");
        if (!std::isfinite(w.depth)) throw std::invalid_argument("well minimum must be finite");
    }
}

PotentialSpec PotentialSpec::single_well(double radius, double depth) {
    return PotentialSpec({Well{{0.0, 0.0, 0.0}, radius, depth}});
}

PotentialSpec PotentialSpec::double_well(double separation, double radius, double m1, double m2) {
    return PotentialSpec({Well{{-separation / 2, 0.0, 0.0}, radius, m1},
                          Well{{separation / 2, 0.0, 0.0}, radius, m2}});
}

PotentialSpec PotentialSpec::triple_well(double spacing, double radius, double m1, double m2,
                                         double m3) {
    // equilateral triangle in the z = 0 plane, centroid at the origin
    const double rc = spacing / std::sqrt(3.0);
    std::vector<Well> w;
    const double ms[3] = {m1, m2, m3};
    for (int i = 0; i < 3; ++i) {
        const double th = 2.0 * std::numbers::pi * i / 3.0;
        w.push_back(Well{{rc * std::cos(th), rc * std::sin(th), 0.0}, radius, ms[i]});
    }
    return PotentialSpec(std::move(w));
}

double PotentialSpec::operator()(const Vec3& x) const {
    double prod = 1.0;
    for (const Well& w : wells_)
        prod *= 1.0 - (2.0 - w.depth) * bump_profile(distance(x, w.center) / w.radius);
    return 1.0 + prod;
}

int PotentialSpec::well_index(const Vec3& x) const {
    for (std::size_t i = 0; i < wells_.size(); ++i)
        if (distance(x, wells_[i].center) < wells_[i].radius) return static_cast<int>(i);
    return -1;
}

double PotentialSpec::dist_minima_to_complement() const {
    double d = std::numeric_limits<double>::infinity();
    for (const Well& w : wells_) d = std::min(d, w.radius);
    return d;
}

double PotentialSpec::min_well_gap() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < wells_.size(); ++i)
        for (std::size_t j = i + 1; j < wells_.size(); ++j)
            d = std::min(d, distance(wells_[i].center, wells_[j].center) - wells_[i].radius -
                                wells_[j].radius);
    return d;
}

PotentialReport check_potential(const PotentialSpec& pot, int samples_per_axis) {
    PotentialReport rep;
    // sample a box covering every well plus a margin
    double extent = 0.0;
    for (const Well& w : pot.wells())
        extent = std::max(extent, norm(w.center) + 1.5 * w.radius);
    double vmin = std::numeric_limits<double>::infinity();
    for (const Well& w : pot.wells()) vmin = std::min(vmin, pot(w.center));
    const int m = samples_per_axis;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Vec3 x{-extent + 2 * extent * i / (m - 1), -extent + 2 * extent * j / (m - 1),
                             -extent + 2 * extent * k / (m - 1)};
                vmin = std::min(vmin, pot(x));
            }
    rep.sampled_min = vmin;
    rep.v1_floor = vmin >= 1.0 - 1e-12 && std::abs(vmin - 1.0) <= 1e-6;

    bool v2 = std::isfinite(pot.min_well_gap()) ? pot.min_well_gap() > 0.0 : true;
    for (const Well& w : pot.wells()) {
        // Fibonacci sphere samples on the boundary
        double bmin = std::numeric_limits<double>::infinity();
        const int ns = 400;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int s = 0; s < ns; ++s) {
            const double z = 1.0 - 2.0 * (s + 0.5) / ns;
            const double r = std::sqrt(1.0 - z * z);
            const Vec3 d{r * std::cos(golden * s), r * std::sin(golden * s), z};
            const Vec3 x{w.center[0] + w.radius * d[0], w.center[1] + w.radius * d[1],
                         w.center[2] + w.radius * d[2]};
            bmin = std::min(bmin, pot(x));
        }
        rep.boundary_min.push_back(bmin);
        if (!(pot(w.center) < bmin)) v2 = false;
    }
    rep.v2_wells = v2;
    return rep;
}

ScalarField sample_scaled_potential(const GridSpec& grid, const PotentialSpec& pot, double epsilon) {
    return ScalarField::from_function(grid, [&](const Vec3& x) {
        return pot({epsilon * x[0], epsilon * x[1], epsilon * x[2]});
    });
}

}  // namespace choquard
