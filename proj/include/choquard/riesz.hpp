#pragma once

#include <memory>
#include <string>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// How the (singular) zero-frequency value of the Riesz multiplier is fixed.
enum class ZeroModeRule {
    /// Constant offset that makes the periodic kernel match the free-space kernel
    /// on the padded box (least squares over 2h <= |x| <= L).
    image_calibrated,
    /// Integral of the kernel truncated to the padded box.
    truncate_to_box_mean,
    /// Screened symbol (|2 pi xi|^2 + kappa^2)^(-alpha/2) at every frequency.
    screen,
};

ZeroModeRule parse_zero_mode_rule(const std::string& name);
std::string to_string(ZeroModeRule rule);

/// Normalization of I_alpha(x) = c / |x|^(N - alpha) at N = 3.
double riesz_kernel_constant(double alpha);

/// Integral of |x|^(alpha-3) over the unit cube [-1/2, 1/2]^3.
double unit_cube_kernel_integral(double alpha);

/// Free-space convolution with the Riesz potential I_alpha, realized on a 2x zero-padded
/// periodic grid by the Fourier symbol (2 pi |xi|)^(-alpha).
class RieszOperator {
public:
    RieszOperator(const GridSpec& grid, double alpha,
                  ZeroModeRule rule = ZeroModeRule::image_calibrated, double kappa = 1.0);

    double alpha() const { return alpha_; }
    const GridSpec& grid() const { return grid_; }
    int padded_n() const { return 2 * grid_.n(); }
    ZeroModeRule zero_mode_rule() const { return rule_; }
    double zero_mode() const { return multiplier_->front(); }
    /// Multiplier on the padded r2c half-spectrum, layout (i, j, k<=M/2).
    const std::vector<double>& multiplier() const { return *multiplier_; }

    /// I_alpha * g sampled on the original grid.
    ScalarField convolve(const ScalarField& g) const;

    /// True when g is below 1e-6 * max|g| on the outer quarter of the box
    /// (|x|_inf >= 3L/4), i.e. periodic images cannot contaminate the result.
    bool free_space_valid(const ScalarField& g) const;

private:
    GridSpec grid_;
    double alpha_;
    ZeroModeRule rule_;
    double kappa_;
    std::shared_ptr<const std::vector<double>> multiplier_;
};

struct RieszResult {
    ScalarField value;
    bool decay_warning = false;
};

/// Convolution plus the periodic-contamination flag; throws on grid mismatch.
RieszResult riesz_convolve(const RieszOperator& op, const ScalarField& g);

}  // namespace choquard
