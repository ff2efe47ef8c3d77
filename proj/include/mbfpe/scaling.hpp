#pragma once

#include <functional>
#include <limits>

namespace mbfpe {

using RealFn = std::function<double(double)>;

/// Scaling indices of x -> eps^a x, t -> eps^b t, W -> eps^c W, D1 -> eps^d D1, D2 -> eps^e D2.
/// The FPE keeps its form iff b = a - d = 2a - e; normalizability fixes c = -a.
struct ScalingExponents {
    double a;
    double b;
    double c;
    double d;
    double e;
    double alpha;  ///< a / b, the exponent of the similarity variable z = x / t^alpha

    bool operator==(const ScalingExponents&) const = default;
};

/// Canonical exponent set in the b = 1 gauge.
ScalingExponents make_exponents(double alpha);

/// True when all index relations hold, up to the rounding of d and e.
bool is_consistent(const ScalingExponents& ex);

/// z = x / t^alpha. Requires t > 0.
double similarity_variable(double x, double t, double alpha);

/// Scale-invariant drift/diffusion profiles together with f = y'/y.
///
/// Derivatives are carried as closures alongside the values so that residual
/// checks never fall back on numerical differentiation.
struct ScaleInvariantProfile {
    RealFn rho1;
    RealFn rho1_prime;
    RealFn rho2;
    RealFn rho2_prime;
    RealFn rho2_second;
    RealFn f;
    RealFn f_prime;
    double z_lo = -std::numeric_limits<double>::infinity();
    double z_hi = std::numeric_limits<double>::infinity();

    bool contains(double z) const { return z >= z_lo && z <= z_hi; }
};

/// rho1 = f rho2 + rho2' + alpha z: the first integral with C = 0 solved for the drift.
RealFn drift_from_f(RealFn f, RealFn rho2, RealFn rho2_prime, double alpha);

/// d/dz of drift_from_f.
RealFn drift_derivative_from_f(RealFn f, RealFn f_prime, RealFn rho2, RealFn rho2_prime,
                               RealFn rho2_second, double alpha);

/// f = (rho1 - rho2' - alpha z) / rho2 evaluated at z; rho2(z) must be nonzero.
double f_from_drift(double rho1, double rho2, double rho2_prime, double alpha, double z);

}  // namespace mbfpe
