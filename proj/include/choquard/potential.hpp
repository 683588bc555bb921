#pragma once

#include <string>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// A ball-shaped well O^i with minimum m_i attained only at its center.
struct Well {
    Vec3 center{};
    double radius = 1.0;
    double depth = 1.0;  // m_i = inf over O^i of V
};

/// V(x) = 1 + prod_i (1 - (2 - m_i) b(|x - c_i| / r_i)), b(s) = exp(1 - 1/(1 - s^4)) on s < 1.
/// V = 2 away from the wells, V(c_i) = m_i, and V is smooth.
class PotentialSpec {
public:
    explicit PotentialSpec(std::vector<Well> wells);

    static PotentialSpec single_well(double radius = 2.0, double depth = 1.0);
    /// Wells on the x axis at +/- separation/2.
    static PotentialSpec double_well(double separation, double radius, double m1, double m2);
    static PotentialSpec triple_well(double spacing, double radius, double m1, double m2, double m3);

    const std::vector<Well>& wells() const { return wells_; }
    std::size_t size() const { return wells_.size(); }

    double operator()(const Vec3& x) const;
    /// Index of the well whose open ball contains x, or -1.
    int well_index(const Vec3& x) const;

    /// dist(M, O^c) for the minimum set M = {c_i}.
    double dist_minima_to_complement() const;
    /// min_{i != j} dist(O^i, O^j); +inf for a single well.
    double min_well_gap() const;

private:
    std::vector<Well> wells_;
};

double bump_profile(double s);

struct PotentialReport {
    bool v1_floor = false;     // V >= 1 everywhere sampled and inf V = 1
    bool v2_wells = false;     // wells disjoint and m_i < min over the sphere |x - c_i| = r_i
    double sampled_min = 0.0;
    std::vector<double> boundary_min;  // per well
    bool ok() const { return v1_floor && v2_wells; }
};

/// Dense-sampling check of the floor and well conditions.
PotentialReport check_potential(const PotentialSpec& pot, int samples_per_axis = 81);

/// V_eps(x) = V(eps x) on the grid.
ScalarField sample_scaled_potential(const GridSpec& grid, const PotentialSpec& pot, double epsilon);

}  // namespace choquard
