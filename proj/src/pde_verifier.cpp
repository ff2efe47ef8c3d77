#include "mbfpe/pde_verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mbfpe/errors.hpp"
#include "mbfpe/quadrature.hpp"

namespace mbfpe {
namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre8(const F& g, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k)
        acc += kGlWeights[k] * (g(c - h * kGlNodes[k]) + g(c + h * kGlNodes[k]));
    return acc * h;
}

}  // namespace

ZGrid ZGrid::uniform(double z_lo, double z_hi, std::size_t n_cells) {
    if (n_cells < 2) throw DomainError("grid needs at least two cells");
    if (!(z_lo < z_hi) || !std::isfinite(z_lo) || !std::isfinite(z_hi))
        throw DomainError("grid requires finite z_lo < z_hi");
    ZGrid g;
    g.z_lo = z_lo;
    g.z_hi = z_hi;
    g.n_cells = n_cells;
    const double h = (z_hi - z_lo) / static_cast<double>(n_cells);
    g.faces.resize(n_cells + 1);
    g.centers.resize(n_cells);
    for (std::size_t i = 0; i <= n_cells; ++i) g.faces[i] = z_lo + h * static_cast<double>(i);
    g.faces.back() = z_hi;
    for (std::size_t i = 0; i < n_cells; ++i) g.centers[i] = z_lo + h * (static_cast<double>(i) + 0.5);
    return g;
}

double mass(const ZGrid& grid, std::span<const double> u) {
    return grid.spacing() * std::accumulate(u.begin(), u.end(), 0.0);
}

double l1_distance(const ZGrid& grid, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("l1_distance: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc * grid.spacing();
}

double bernoulli_weight(double w) {
    if (std::abs(w) < 1e-5) return 1.0 - 0.5 * w + w * w / 12.0;
    return w / std::expm1(w);
}

DiscreteOperator::DiscreteOperator(ZGrid grid, std::vector<double> face_w,
                                   std::vector<double> face_diffusion)
    : grid_(std::move(grid)), w_(std::move(face_w)) {
    const std::size_t n = grid_.n_cells;
    if (w_.size() + 1 != n || face_diffusion.size() + 1 != n)
        throw DomainError("operator needs one exponent and one diffusion value per interior face");
    const double h = grid_.spacing();
    plus_.resize(n - 1);
    minus_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        plus_[i] = face_diffusion[i] / h * bernoulli_weight(w_[i]);
        minus_[i] = face_diffusion[i] / h * bernoulli_weight(-w_[i]);
    }
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) {
            upper_[i] = plus_[i] / h;
            diag_[i] -= minus_[i] / h;
        }
        if (i > 0) {
            lower_[i] = minus_[i - 1] / h;
            diag_[i] -= plus_[i - 1] / h;
        }
    }
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
    const std::size_t n = grid_.n_cells;
    if (u.size() != n) throw DomainError("apply: field size does not match grid");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag_[i] * u[i];
        if (i > 0) acc += lower_[i] * u[i - 1];
        if (i + 1 < n) acc += upper_[i] * u[i + 1];
        out[i] = acc;
    }
    return out;
}

std::vector<double> DiscreteOperator::face_fluxes(std::span<const double> u) const {
    const std::size_t n = grid_.n_cells;
    if (u.size() != n) throw DomainError("face_fluxes: field size does not match grid");
    std::vector<double> flux(n + 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) flux[i + 1] = plus_[i] * u[i + 1] - minus_[i] * u[i];
    return flux;
}

std::vector<double> DiscreteOperator::column_sums() const {
    const std::size_t n = grid_.n_cells;
    std::vector<double> sums(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = diag_[j];
        if (j > 0) acc += upper_[j - 1];
        if (j + 1 < n) acc += lower_[j + 1];
        sums[j] = acc;
    }
    return sums;
}

std::vector<double> DiscreteOperator::stationary_state() const {
    // Zero flux on every face: u_{i+1} / u_i = B(-w) / B(w) = e^w.
    const std::size_t n = grid_.n_cells;
    std::vector<double> logu(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) logu[i + 1] = logu[i] + w_[i];
    const double peak = *std::max_element(logu.begin(), logu.end());
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(logu[i] - peak);
    const double m = mass(grid_, u);
    for (double& v : u) v /= m;
    return u;
}

ZGrid solution_grid(const SimilaritySolution& sol, std::size_t n_cells, double tail_mass) {
    const Interval s = sol.finite_support(tail_mass);
    return ZGrid::uniform(s.lo, s.hi, n_cells);
}

DiscreteOperator transformed_operator(const SimilaritySolution& sol, const ZGrid& grid) {
    const double lo = sol.z_lo();
    const double hi = sol.z_hi();
    const bool lo_ok = std::isfinite(lo) ? grid.z_lo == lo : grid.z_lo < hi;
    const bool hi_ok = std::isfinite(hi) ? grid.z_hi == hi : grid.z_hi > lo;
    if (!lo_ok || !hi_ok || grid.z_lo < lo || grid.z_hi > hi)
        throw DomainError("grid does not match the solution's z-domain");

    const ScaleInvariantProfile& pr = sol.profile();
    const double alpha = sol.alpha();
    auto f = [&](double z) { return f_from_drift(pr.rho1(z), pr.rho2(z), pr.rho2_prime(z), alpha, z); };

    const std::size_t n = grid.n_cells;
    std::vector<double> w(n - 1);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] = gauss_legendre8(f, grid.centers[i], grid.centers[i + 1]);
        d[i] = pr.rho2(grid.faces[i + 1]);
    }
    return DiscreteOperator(grid, std::move(w), std::move(d));
}

FieldOnGrid evolve(const DiscreteOperator& op, const FieldOnGrid& u0, double s_end, double ds,
                   const EvolveObserver& observer) {
    const ZGrid& grid = op.grid();
    const std::size_t n = grid.n_cells;
    if (!(ds > 0.0)) throw DomainError("evolve: ds must be positive");
    if (u0.values.size() != n) throw DomainError("evolve: initial field does not match grid");
    if (!(s_end >= u0.time_s)) throw DomainError("evolve: s_end precedes the initial time");
    if (std::any_of(u0.values.begin(), u0.values.end(), [](double v) { return !(v >= 0.0); }))
        throw DomainError("evolve: initial field must be nonnegative");
    const double m0 = mass(grid, u0.values);
    if (std::abs(m0 - 1.0) > 1e-9) throw DomainError("evolve: initial field must have unit mass");

    const auto steps = static_cast<std::size_t>(std::ceil((s_end - u0.time_s) / ds - 1e-9));
    const double step = steps > 0 ? (s_end - u0.time_s) / static_cast<double>(steps) : 0.0;

    FieldOnGrid field = u0;
    field.mass_history = {m0};
    if (observer) observer(field);

    const auto lower = op.lower();
    const auto diag = op.diag();
    const auto upper = op.upper();
    std::vector<double> cprime(n);
    std::vector<double> rhs(n);
    for (std::size_t k = 0; k < steps; ++k) {
        // Thomas algorithm on (I - step L) u_new = u_old.
        double denom = 1.0 - step * diag[0];
        cprime[0] = -step * upper[0] / denom;
        rhs[0] = field.values[0] / denom;
        for (std::size_t i = 1; i < n; ++i) {
            const double a = -step * lower[i];
            denom = (1.0 - step * diag[i]) - a * cprime[i - 1];
            cprime[i] = i + 1 < n ? -step * upper[i] / denom : 0.0;
            rhs[i] = (field.values[i] - a * rhs[i - 1]) / denom;
        }
        field.values[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) field.values[i] = rhs[i] - cprime[i] * field.values[i + 1];

        if (std::any_of(field.values.begin(), field.values.end(), [](double v) { return v < 0.0; }))
            throw PositivityError("evolve: negative density after implicit step");
        field.time_s = u0.time_s + step * static_cast<double>(k + 1);
        field.mass_history.push_back(mass(grid, field.values));
        if (observer) observer(field);
    }
    return field;
}

double max_relative_mass_drift(const FieldOnGrid& field) {
    double worst = 0.0;
    for (std::size_t k = 1; k < field.mass_history.size(); ++k) {
        const double prev = field.mass_history[k - 1];
        worst = std::max(worst, std::abs(field.mass_history[k] - prev) / prev);
    }
    return worst;
}

std::vector<double> cell_averages(const SimilaritySolution& sol, const ZGrid& grid) {
    const double h = grid.spacing();
    QuadratureOptions opts;
    opts.rel_tol = 1e-12;
    std::vector<double> avg(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const QuadratureResult r = integrate_adaptive([&](double z) { return sol.y(z); }, grid.faces[i],
                                                      grid.faces[i + 1], 1e-16, opts);
        avg[i] = r.value / h;
    }
    return avg;
}

std::vector<double> sampled_profile(const SimilaritySolution& sol, const ZGrid& grid) {
    std::vector<double> u(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) u[i] = sol.y(grid.centers[i]);
    return u;
}

FieldOnGrid uniform_field(const ZGrid& grid, double s0) {
    FieldOnGrid f;
    f.values.assign(grid.n_cells, 1.0 / (grid.z_hi - grid.z_lo));
    f.time_s = s0;
    return f;
}

FieldOnGrid triangle_field(const ZGrid& grid, double apex_fraction, double s0) {
    if (!(apex_fraction > 0.0 && apex_fraction < 1.0))
        throw DomainError("triangle apex must lie strictly inside the grid");
    const double width = grid.z_hi - grid.z_lo;
    const double apex = grid.z_lo + apex_fraction * width;
    FieldOnGrid f;
    f.time_s = s0;
    f.values.resize(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double z = grid.centers[i];
        f.values[i] = z <= apex ? (z - grid.z_lo) / (apex - grid.z_lo) : (grid.z_hi - z) / (grid.z_hi - apex);
    }
    const double m = mass(grid, f.values);
    for (double& v : f.values) v /= m;
    return f;
}

double fpe_residual_at(const SimilaritySolution& sol, double x, double t, double h, double dt) {
    if (!(h > 0.0) || !(dt > 0.0) || !(t - dt > 0.0))
        throw DomainError("fpe residual needs h > 0 and 0 < dt < t");
    auto w = [&](double xx, double tt) { return density(sol, xx, tt); };
    auto drift_flux = [&](double xx) { return coefficients(sol, xx, t).drift * w(xx, t); };
    auto diff_flux = [&](double xx) { return coefficients(sol, xx, t).diffusion * w(xx, t); };
    const double dw_dt = (w(x, t + dt) - w(x, t - dt)) / (2.0 * dt);
    const double d_drift = (drift_flux(x + h) - drift_flux(x - h)) / (2.0 * h);
    const double d2_diff = (diff_flux(x + h) - 2.0 * diff_flux(x) + diff_flux(x - h)) / (h * h);
    return dw_dt + d_drift - d2_diff;
}

double residual_original_coordinates(const SimilaritySolution& sol, double x_grid_step, double t,
                                     double dt) {
    const Interval s = sol.finite_support();
    const double p = std::pow(t, sol.alpha());
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double x = (s.lo + (s.hi - s.lo) * k / 10.0) * p;
        worst = std::max(worst, std::abs(fpe_residual_at(sol, x, t, x_grid_step, dt)));
    }
    return worst;
}

}  // namespace mbfpe
