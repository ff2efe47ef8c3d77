#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mbfpe/solutions.hpp"

namespace mbfpe {

/// Particle positions in x at a common time t.
struct PathEnsemble {
    std::vector<double> positions;
    double t = 0.0;
    std::uint64_t n_reflections = 0;
    std::uint64_t seed = 0;
    /// Number of completed steps; keys the random stream of the next step.
    std::uint64_t step_count = 0;
};

/// Standard normal variate for (seed, stream, index). Stateless, so any
/// partition of the particles sees the same numbers.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform variate in (0, 1) for (seed, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// n particles drawn from W(., t0) by inverse CDF on a 10^4-interval table.
PathEnsemble sample_initial(const SimilaritySolution& sol, std::size_t n, double t0, std::uint64_t seed);

struct StepOptions {
    /// Multiplies sqrt(2 D2 dt); 0 gives the deterministic drift flow.
    double noise_scale = 1.0;
    /// Worker threads; results do not depend on this value.
    unsigned workers = 1;
};

/// One Euler-Maruyama step dX = D1 dt + sqrt(2 D2) dB (Ito) followed by mirror
/// reflection about the boundaries at t + dt. Throws StepRejected, leaving the
/// ensemble unchanged, if a particle would end outside after one reflection.
PathEnsemble step_ensemble(PathEnsemble ens, const SimilaritySolution& sol, double dt,
                           const StepOptions& opts = {});

/// Steps from ens.t to t_end with dt <= max_dt, also capping boundary travel
/// per step at 10% of the domain width. Rejected steps are retried at half size.
PathEnsemble propagate(PathEnsemble ens, const SimilaritySolution& sol, double t_end, double max_dt,
                       const StepOptions& opts = {});

struct Histogram {
    std::vector<double> bin_centers;
    std::vector<double> empirical_density;
    std::vector<double> analytic_density;
    double bin_width = 0.0;

    /// L1 distance sum |empirical - analytic| * bin_width.
    double l1() const;
};

/// Histogram over the instantaneous domain [x_lo(t), x_hi(t)]; an unbounded end
/// is truncated where the remaining mass is below 1e-12.
Histogram histogram(const PathEnsemble& ens, const SimilaritySolution& sol, std::size_t n_bins);

double histogram_distance(const PathEnsemble& ens, const SimilaritySolution& sol, std::size_t n_bins);

/// CSV with header bin_center,empirical_density,analytic_density.
void write_histogram_csv(std::ostream& os, const Histogram& h);

}  // namespace mbfpe
