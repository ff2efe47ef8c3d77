#pragma once

namespace mbfpe {

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln B(p, q) for p, q > 0, assembled in log space.
double ln_beta(double p, double q);

/// Euler Beta function B(p, q) for p, q > 0.
double beta(double p, double q);

/// Kummer confluent hypergeometric function 1F1(a; b; x), b > 0.
///
/// Summed by term ratios; negative arguments go through the Kummer
/// transformation 1F1(a; b; x) = e^x 1F1(b - a; b; -x) first so the series
/// never alternates. Throws ConvergenceError past 1e5 terms.
double kummer_1f1(double a, double b, double x);

/// Tricomi confluent hypergeometric function U(a, b, x) for a > 0, x > 0,
/// from its Laplace-type integral representation.
double tricomi_u(double a, double b, double x);

/// Whittaker W_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} U(mu - kappa + 1/2, 1 + 2 mu, x).
/// Uses W_{kappa,mu} = W_{kappa,-mu} to evaluate with mu >= 0.
double whittaker_w(double kappa, double mu, double x);

}  // namespace mbfpe
