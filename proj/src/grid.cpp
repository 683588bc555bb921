#include "choquard/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace choquard {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double distance(const Vec3& a, const Vec3& b) {
    return norm({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

GridSpec::GridSpec(int n, double half_length) : n_(n), half_length_(half_length) {}

GridSpec make_grid(int n, double half_length) {
    if (!is_power_of_two(n) || n < 16)
        throw std::invalid_argument("grid size n=" + std::to_string(n) +
                                    " must be a power of two and at least 16");
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw std::invalid_argument("grid half-length must be positive and finite");
    return GridSpec(n, half_length);
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field value count does not match grid");
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(*this, o, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(*this, o, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
    require_same_grid(*this, o, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
    return *this;
}

double ScalarField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "hadamard");
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double integrate(const ScalarField& u) {
    double s = 0.0;
    for (double v : u.values()) s += v;
    return s * u.grid().cell_volume();
}

double inner(const ScalarField& u, const ScalarField& v) {
    require_same_grid(u, v, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s * u.grid().cell_volume();
}

double l2_norm(const ScalarField& u) { return std::sqrt(inner(u, u)); }

}  // namespace choquard
