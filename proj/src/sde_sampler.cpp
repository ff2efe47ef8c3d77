#include "mbfpe/sde_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

#include "mbfpe/errors.hpp"
#include "mbfpe/quadrature.hpp"

namespace mbfpe {
namespace {

constexpr std::uint64_t kInitStream = ~std::uint64_t{0};
constexpr std::size_t kCdfIntervals = 10000;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) { return mix64(seed ^ mix64(stream)); }

std::uint64_t draw_bits(std::uint64_t key, std::uint64_t index) {
    return mix64(key + index * 0xd1b54a32d192ed03ULL);
}

double bits_to_normal(std::uint64_t bits) {
    constexpr double scale = 1.0 / 4294967296.0;
    const double u1 = (static_cast<double>(bits >> 32) + 0.5) * scale;
    const double u2 = (static_cast<double>(bits & 0xffffffffULL) + 0.5) * scale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double bits_to_uniform(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Coefficients at a fixed time with the powers of t hoisted out.
struct FrozenCoefficients {
    const SimilaritySolution& sol;
    double t;
    double p;
    double drift_scale;
    double diffusion_scale;
    double lo;
    double hi;

    FrozenCoefficients(const SimilaritySolution& s, double time)
        : sol(s),
          t(time),
          p(std::pow(time, s.alpha())),
          drift_scale(std::pow(time, s.alpha() - 1.0)),
          diffusion_scale(std::pow(time, 2.0 * s.alpha() - 1.0)),
          lo(s.z_lo() * p),
          hi(s.z_hi() * p) {}

    Coefficients at(double x) const {
        if (x <= lo || x >= hi) return coefficients(sol, x, t);
        const double z = x / p;
        return {drift_scale * sol.rho1(z), diffusion_scale * sol.rho2(z)};
    }
};

template <class Body>
void run_partitioned(std::size_t n, unsigned workers, const Body& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        body(0, n, 0);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min(n, w * chunk);
        const std::size_t e = std::min(n, b + chunk);
        pool.emplace_back([&body, b, e, w] { body(b, e, w); });
    }
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return bits_to_normal(draw_bits(stream_key(seed, stream), index));
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return bits_to_uniform(draw_bits(stream_key(seed, stream), index));
}

PathEnsemble sample_initial(const SimilaritySolution& sol, std::size_t n, double t0, std::uint64_t seed) {
    if (!(t0 > 0.0)) throw DomainError("sample_initial requires t0 > 0");
    if (n == 0) throw DomainError("sample_initial requires at least one particle");
    const Interval support = sol.finite_support();
    const double width = support.hi - support.lo;

    std::vector<double> nodes(kCdfIntervals + 1);
    std::vector<double> cdf(kCdfIntervals + 1, 0.0);
    for (std::size_t i = 0; i <= kCdfIntervals; ++i)
        nodes[i] = support.lo + width * static_cast<double>(i) / static_cast<double>(kCdfIntervals);
    nodes.back() = support.hi;
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    for (std::size_t i = 0; i < kCdfIntervals; ++i) {
        const QuadratureResult r =
            integrate_adaptive([&](double z) { return sol.y(z); }, nodes[i], nodes[i + 1], 1e-18, opts);
        cdf[i + 1] = cdf[i] + r.value;
    }
    const double total = cdf.back();
    for (double& c : cdf) c /= total;

    PathEnsemble ens;
    ens.t = t0;
    ens.seed = seed;
    ens.positions.resize(n);
    const double p = std::pow(t0, sol.alpha());
    const std::uint64_t key = stream_key(seed, kInitStream);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = bits_to_uniform(draw_bits(key, k));
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t i = std::min<std::size_t>(
            kCdfIntervals - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - cdf.begin() - 1)));
        const double span = cdf[i + 1] - cdf[i];
        const double frac = span > 0.0 ? (u - cdf[i]) / span : 0.5;
        const double z = nodes[i] + frac * (nodes[i + 1] - nodes[i]);
        ens.positions[k] = std::clamp(z * p, support.lo * p, support.hi * p);
    }
    return ens;
}

PathEnsemble step_ensemble(PathEnsemble ens, const SimilaritySolution& sol, double dt,
                           const StepOptions& opts) {
    if (!(dt > 0.0)) throw DomainError("step_ensemble requires dt > 0");
    if (!(ens.t > 0.0)) throw DomainError("step_ensemble requires t > 0");
    const double t_next = ens.t + dt;
    const FrozenCoefficients now(sol, ens.t);
    const Interval next = boundary_positions(sol, t_next);
    const std::uint64_t key = stream_key(ens.seed, ens.step_count);
    const double noise = opts.noise_scale * std::sqrt(2.0 * dt);

    const std::size_t n = ens.positions.size();
    std::vector<double> out(n);
    std::vector<std::uint64_t> reflections(std::max(1u, opts.workers), 0);
    std::vector<char> rejected(std::max(1u, opts.workers), 0);
    run_partitioned(n, opts.workers, [&](std::size_t b, std::size_t e, unsigned w) {
        std::uint64_t refl = 0;
        for (std::size_t k = b; k < e; ++k) {
            const double x = ens.positions[k];
            const Coefficients c = now.at(x);
            double xn = x + c.drift * dt;
            if (noise != 0.0 && c.diffusion > 0.0)
                xn += noise * std::sqrt(c.diffusion) * bits_to_normal(draw_bits(key, k));
            if (xn < next.lo) {
                xn = 2.0 * next.lo - xn;
                ++refl;
            } else if (xn > next.hi) {
                xn = 2.0 * next.hi - xn;
                ++refl;
            }
            if (xn < next.lo || xn > next.hi) rejected[w] = 1;
            out[k] = xn;
        }
        reflections[w] = refl;
    });
    if (std::any_of(rejected.begin(), rejected.end(), [](char r) { return r != 0; }))
        throw StepRejected("particle crossed both boundaries in one step; reduce dt");

    ens.positions = std::move(out);
    for (std::uint64_t r : reflections) ens.n_reflections += r;
    ens.t = t_next;
    ++ens.step_count;
    return ens;
}

PathEnsemble propagate(PathEnsemble ens, const SimilaritySolution& sol, double t_end, double max_dt,
                       const StepOptions& opts) {
    if (!(max_dt > 0.0)) throw DomainError("propagate requires max_dt > 0");
    if (!(t_end >= ens.t)) throw DomainError("propagate cannot run backwards in time");
    const Interval support = sol.finite_support();
    const double alpha = sol.alpha();
    auto travel = [&](double t, double dt) {
        const double grow = std::abs(std::pow(t + dt, alpha) - std::pow(t, alpha));
        return std::max(std::abs(support.lo), std::abs(support.hi)) * grow;
    };

    while (ens.t < t_end) {
        double dt = std::min(max_dt, t_end - ens.t);
        const double width = (support.hi - support.lo) * std::pow(ens.t, alpha);
        while (travel(ens.t, dt) > 0.1 * width) dt *= 0.5;
        // Land exactly on t_end when the remaining interval is nearly one step.
        if (t_end - (ens.t + dt) < 1e-12 * t_end) dt = t_end - ens.t;
        for (int attempt = 0;; ++attempt) {
            try {
                const double t_before = ens.t;
                ens = step_ensemble(std::move(ens), sol, dt, opts);
                if (dt == t_end - t_before) ens.t = t_end;
                break;
            } catch (const StepRejected&) {
                if (attempt > 40) throw;
                dt *= 0.5;
            }
        }
    }
    return ens;
}

double Histogram::l1() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < bin_centers.size(); ++i)
        acc += std::abs(empirical_density[i] - analytic_density[i]);
    return acc * bin_width;
}

Histogram histogram(const PathEnsemble& ens, const SimilaritySolution& sol, std::size_t n_bins) {
    if (ens.positions.empty()) throw DomainError("histogram of an empty ensemble");
    if (n_bins < 10) throw DomainError("histogram needs at least 10 bins");
    const Interval z = sol.finite_support();
    const double p = std::pow(ens.t, sol.alpha());
    const double lo = std::min(z.lo * p, z.hi * p);
    const double hi = std::max(z.lo * p, z.hi * p);

    Histogram h;
    h.bin_width = (hi - lo) / static_cast<double>(n_bins);
    h.bin_centers.resize(n_bins);
    h.empirical_density.assign(n_bins, 0.0);
    h.analytic_density.resize(n_bins);
    for (double x : ens.positions) {
        if (x < lo || x > hi) continue;
        const auto b = std::min(n_bins - 1, static_cast<std::size_t>((x - lo) / h.bin_width));
        h.empirical_density[b] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(ens.positions.size()) * h.bin_width);
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    for (std::size_t b = 0; b < n_bins; ++b) {
        const double a = lo + h.bin_width * static_cast<double>(b);
        const double e = b + 1 == n_bins ? hi : a + h.bin_width;
        h.bin_centers[b] = 0.5 * (a + e);
        h.empirical_density[b] *= norm;
        const QuadratureResult r =
            integrate_adaptive([&](double x) { return density(sol, x, ens.t); }, a, e, 1e-14, opts);
        h.analytic_density[b] = r.value / h.bin_width;
    }
    return h;
}

double histogram_distance(const PathEnsemble& ens, const SimilaritySolution& sol, std::size_t n_bins) {
    return histogram(ens, sol, n_bins).l1();
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
    const auto old = os.precision(17);
    os << "bin_center,empirical_density,analytic_density\n";
    for (std::size_t i = 0; i < h.bin_centers.size(); ++i)
        os << h.bin_centers[i] << ',' << h.empirical_density[i] << ',' << h.analytic_density[i] << '\n';
    os.precision(old);
}

}  // namespace mbfpe
