#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbfpe/solutions.hpp"

namespace mbfpe {

enum class Bound { at_most, within };

struct CheckResult {
    std::string name;
    double measured = 0.0;
    Bound bound = Bound::at_most;
    double lo = 0.0;  ///< only used for Bound::within
    double hi = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::vector<double> times{0.3, 1.0, 3.0};
    std::size_t identity_points = 1000;
    std::size_t cells = 400;
    double log_time_span = 10.0;
    double ds = 0.01;
    std::size_t paths = 0;  ///< 0 skips the path-ensemble check
    std::size_t bins = 60;
    std::size_t steps = 200;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    double norm_tol = 1e-8;
    double identity_tol = 1e-10;
    double stationary_tol = 5e-4;
    double pde_l1_tol = 1e-3;
    double mass_drift_tol = 1e-12;
    double sde_l1_tol = 0.05;
};

struct Report {
    std::vector<CheckResult> checks;
    bool all_passed() const;
    void print(std::ostream& os) const;
};

/// Runs every check and collects the outcomes; a failing or throwing check
/// does not stop the others.
Report run_verification(const SimilaritySolution& sol, const VerifyOptions& opts = {});

/// Integral of W(., t) over x by adaptive quadrature.
double total_probability(const SimilaritySolution& sol, double t);

/// |J - J_def| and the magnitude of the terms in J_def at (x, t).
IdentityResidual current_consistency(const SimilaritySolution& sol, double x, double t);

/// Largest residual/scale of an identity over n interior points.
double max_scaled_residual(const SimilaritySolution& sol, std::size_t n,
                           IdentityResidual (*identity)(const SimilaritySolution&, double));

/// Ratio residual(h) / residual(h/2) of the central-difference FPE residual at x.
double fpe_residual_ratio(const SimilaritySolution& sol, double x, double t);

/// L1 distance of the discrete stationary state to the exact cell averages.
double stationary_error(const SimilaritySolution& sol, std::size_t cells);

/// Observed order from errors at n/4 and n cells. With the n/2 point added the
/// least-squares slope in log2 is the same number.
double observed_order(double e_quarter, double e_full);

/// Expected refinement order min(2, 1 + a), a being the smallest boundary exponent of y.
double predicted_refinement_order(const SimilaritySolution& sol);

struct AttractorRun {
    double l1_to_profile = 0.0;
    double max_mass_drift = 0.0;
    std::vector<double> final_values;
};

/// Evolves from the normalized uniform field over the given log-time span.
/// The observer receives (s, mass, L1-to-cell-averages) at every step when set.
AttractorRun run_attractor(const SimilaritySolution& sol, std::size_t cells, double span, double ds,
                           std::ostream* diagnostics = nullptr);

}  // namespace mbfpe
