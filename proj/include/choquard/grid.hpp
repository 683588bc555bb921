#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace choquard {

inline constexpr int kDim = 3;

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v);
double distance(const Vec3& a, const Vec3& b);

/// Uniform periodic box [-L, L)^3 with n nodes per axis; x_j = -L + j*h.
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(int n, double half_length);

    int n() const { return n_; }
    double half_length() const { return half_length_; }
    double spacing() const { return 2.0 * half_length_ / n_; }
    double cell_volume() const { double h = spacing(); return h * h * h; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    double coord(int j) const { return -half_length_ + j * spacing(); }
    Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    /// Index of the node at the origin (n/2 along every axis).
    int center() const { return n_ / 2; }

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && half_length_ == o.half_length_;
    }

private:
    int n_ = 0;
    double half_length_ = 0.0;
};

/// Validates sizes (n a power of two, n >= 16, L > 0) and throws std::invalid_argument otherwise.
GridSpec make_grid(int n, double half_length);

bool is_power_of_two(int n);

/// Real values on a GridSpec, row-major (x slowest).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}
    ScalarField(const GridSpec& grid, std::vector<double> values);

    template <class Fn>
    static ScalarField from_function(const GridSpec& grid, Fn&& fn) {
        ScalarField u(grid);
        const int n = grid.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    u.values_[grid.index(i, j, k)] = fn(grid.node(i, j, k));
        return u;
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    /// this += s * o
    ScalarField& axpy(double s, const ScalarField& o);

    double max_value() const;
    double min_value() const;
    double max_abs() const;
    bool all_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

// Rectangle-rule quadrature, weight h^3 per node.
double integrate(const ScalarField& u);
double inner(const ScalarField& u, const ScalarField& v);
double l2_norm(const ScalarField& u);

}  // namespace choquard
