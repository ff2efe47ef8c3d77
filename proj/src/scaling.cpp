#include "mbfpe/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mbfpe/errors.hpp"

namespace mbfpe {

ScalingExponents make_exponents(double alpha) {
    if (!std::isfinite(alpha) || alpha == 0.0)
        throw DomainError("alpha must be finite and nonzero");
    ScalingExponents ex{};
    ex.b = 1.0;
    ex.a = alpha;
    ex.c = -alpha;
    ex.d = ex.a - ex.b;
    ex.e = 2.0 * ex.a - ex.b;
    ex.alpha = ex.a / ex.b;
    return ex;
}

bool is_consistent(const ScalingExponents& ex) {
    // d = a - b and e = 2a - b are rounded once, so undoing them may be off by an ulp of 2a.
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(ex.a), std::abs(ex.b), 1.0});
    return ex.a != 0.0 && ex.b != 0.0 && std::abs(ex.b - (ex.a - ex.d)) <= tol &&
           std::abs(ex.b - (2.0 * ex.a - ex.e)) <= 2.0 * tol && ex.c == -ex.a && ex.alpha == ex.a / ex.b;
}

double similarity_variable(double x, double t, double alpha) {
    if (!(t > 0.0)) throw DomainError("similarity variable requires t > 0");
    return x / std::pow(t, alpha);
}

RealFn drift_from_f(RealFn f, RealFn rho2, RealFn rho2_prime, double alpha) {
    return [f = std::move(f), rho2 = std::move(rho2), rho2_prime = std::move(rho2_prime),
            alpha](double z) { return f(z) * rho2(z) + rho2_prime(z) + alpha * z; };
}

RealFn drift_derivative_from_f(RealFn f, RealFn f_prime, RealFn rho2, RealFn rho2_prime,
                               RealFn rho2_second, double alpha) {
    return [f = std::move(f), f_prime = std::move(f_prime), rho2 = std::move(rho2),
            rho2_prime = std::move(rho2_prime), rho2_second = std::move(rho2_second),
            alpha](double z) {
        return f_prime(z) * rho2(z) + f(z) * rho2_prime(z) + rho2_second(z) + alpha;
    };
}

double f_from_drift(double rho1, double rho2, double rho2_prime, double alpha, double z) {
    return (rho1 - rho2_prime - alpha * z) / rho2;
}

}  // namespace mbfpe
