#pragma once

#include <cstddef>

#include "mbfpe/scaling.hpp"

namespace mbfpe {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

struct QuadratureOptions {
    /// Relative target; the loop stops once error <= max(tol, rel_tol * |value|).
    double rel_tol = 0.0;
    std::size_t max_panels = 4000;
    /// Length scale L of the half-line map x = lo + L v / (1 - v).
    double half_line_scale = 1.0;
    /// Apply the cubic Hermite map x = lo + (hi - lo)(3u^2 - 2u^3) to soften
    /// algebraic endpoint behaviour x^p (p > -1) before subdividing.
    bool endpoint_smoothing = true;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of g over [lo, hi].
///
/// Either bound may be infinite. Exhausting max_panels does not throw: the
/// best estimate is returned with converged = false.
QuadratureResult integrate_adaptive(const RealFn& g, double lo, double hi, double tol,
                                    const QuadratureOptions& opts = {});

}  // namespace mbfpe
