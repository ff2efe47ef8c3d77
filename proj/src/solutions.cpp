#include "mbfpe/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mbfpe/errors.hpp"
#include "mbfpe/quadrature.hpp"
#include "mbfpe/specfun.hpp"

namespace mbfpe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

struct Geometry {
    ProfileShape shape;
    double z_lo;
    double z_hi;
};

Geometry base_geometry(const ClassParams& p) {
    return std::visit(
        [](const auto& c) -> Geometry {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ClassI>) {
                return {{{{{1.0, c.z1, c.a1}, {-1.0, c.z2, c.a2}}}, 0.0}, c.z1, c.z2};
            } else if constexpr (std::is_same_v<T, ClassII>) {
                return {{{{{1.0, 0.0, c.a1}, {-1.0, c.z2, c.a2}}}, c.beta}, 0.0, c.z2};
            } else {
                return {{{{{1.0, c.z1, c.a1}, {1.0, 0.0, c.a2}}}, -c.beta}, c.z1, kInf};
            }
        },
        p);
}

Geometry reflect(Geometry g) {
    for (LinearFactor& f : g.shape.factors) {
        f.sign = -f.sign;
        f.root = -f.root;
    }
    g.shape.gamma = -g.shape.gamma;
    return {g.shape, -g.z_hi, -g.z_lo};
}

/// log of the closed-form integral of the unnormalized y over its domain.
std::optional<double> closed_form_log_mass(const ClassParams& p) {
    return std::visit(
        [](const auto& c) -> std::optional<double> {
            using T = std::decay_t<decltype(c)>;
            const double s = c.a1 + c.a2;
            if constexpr (std::is_same_v<T, ClassI>) {
                return (s + 1.0) * std::log(c.z2 - c.z1) + ln_beta(c.a1 + 1.0, c.a2 + 1.0);
            } else if constexpr (std::is_same_v<T, ClassII>) {
                return (s + 1.0) * std::log(c.z2) + ln_beta(c.a1 + 1.0, c.a2 + 1.0) +
                       std::log(kummer_1f1(c.a1 + 1.0, s + 2.0, c.beta * c.z2));
            } else {
                if (c.z1 == 0.0) return ln_gamma(s + 1.0) - (s + 1.0) * std::log(c.beta);
                // Whittaker form; its argument is beta z1 (the lower boundary).
                const double x = c.beta * c.z1;
                double w;
                try {
                    w = whittaker_w(0.5 * (c.a2 - c.a1), -0.5 * (s + 1.0), x);
                } catch (const ConvergenceError&) {
                    return std::nullopt;
                }
                return ln_gamma(c.a1 + 1.0) - 0.5 * x - 0.5 * (s + 2.0) * std::log(c.beta) +
                       0.5 * s * std::log(c.z1) + std::log(w);
            }
        },
        p);
}

double natural_scale(const ClassParams& p) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ClassI>) return c.z2 - c.z1;
            else if constexpr (std::is_same_v<T, ClassII>) return c.z2;
            else return (c.a1 + c.a2 + 1.0) / c.beta;
        },
        p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter sets

void validate(const SolutionClass& sc) {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if (!(c.a1 > 0.0) || !(c.a2 > 0.0) || !finite_all({c.a1, c.a2}))
                throw DomainError("a1 and a2 must be finite and positive");
            if constexpr (std::is_same_v<T, ClassI>) {
                if (!finite_all({c.z1, c.z2})) throw DomainError("class I: z1, z2 must be finite");
                if (!(c.z1 < c.z2)) throw DomainError("class I: requires z1 < z2");
            } else if constexpr (std::is_same_v<T, ClassII>) {
                if (!finite_all({c.z2, c.beta})) throw DomainError("class II: z2, beta must be finite");
                if (!(c.z2 > 0.0)) throw DomainError("class II: requires z2 > 0");
            } else {
                if (!finite_all({c.z1, c.beta})) throw DomainError("class III: z1, beta must be finite");
                if (!(c.z1 >= 0.0)) throw DomainError("class III: requires z1 >= 0");
                if (!(c.beta > 0.0)) throw DomainError("class III: requires beta > 0");
            }
        },
        sc.params);
}

SolutionClass mirror(const SolutionClass& sc) {
    if (const auto* c = std::get_if<ClassI>(&sc.params))
        return {ClassI{-c->z2, -c->z1, c->a2, c->a1}, false};
    return {sc.params, !sc.mirrored};
}

ClassISubclass subclass_of(const ClassI& p) {
    if (p.z1 == 0.0 || p.z2 == 0.0) return ClassISubclass::endpoint_at_zero;
    if (p.z1 < 0.0 && p.z2 > 0.0) return ClassISubclass::straddles_zero;
    return ClassISubclass::same_sign;
}

std::string_view to_string(ClassKind k) {
    switch (k) {
        case ClassKind::I: return "I";
        case ClassKind::II: return "II";
        case ClassKind::III: return "III";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Profile shape

double ProfileShape::log_y(double z) const {
    double acc = gamma * z;
    for (const LinearFactor& f : factors) {
        const double v = f.sign * (z - f.root);
        if (v < 0.0) return -kInf;
        if (f.power == 0.0) continue;
        if (v == 0.0) return -kInf;
        acc += f.power * std::log(v);
    }
    return acc;
}

double ProfileShape::dlog_y(double z) const {
    return factors[0].power / (z - factors[0].root) + factors[1].power / (z - factors[1].root) + gamma;
}

double ProfileShape::d2log_y(double z) const {
    const double d0 = z - factors[0].root;
    const double d1 = z - factors[1].root;
    return -factors[0].power / (d0 * d0) - factors[1].power / (d1 * d1);
}

double ProfileShape::rho2(double z) const {
    return factors[0].sign * (z - factors[0].root) * factors[1].sign * (z - factors[1].root);
}

double ProfileShape::rho2_prime(double z) const {
    return factors[0].sign * factors[1].sign * ((z - factors[0].root) + (z - factors[1].root));
}

double ProfileShape::rho2_second() const { return 2.0 * factors[0].sign * factors[1].sign; }

// ---------------------------------------------------------------------------
// SimilaritySolution

SimilaritySolution::SimilaritySolution(double alpha, const SolutionClass& params)
    : exponents_(make_exponents(alpha)), params_(params) {
    validate(params_);
    Geometry geo = base_geometry(params_.params);
    if (params_.mirrored) geo = reflect(geo);
    shape_ = geo.shape;
    z_scale_ = natural_scale(params_.params);

    const ProfileShape shape = shape_;
    profile_.z_lo = geo.z_lo;
    profile_.z_hi = geo.z_hi;
    profile_.rho2 = [shape](double z) { return shape.rho2(z); };
    profile_.rho2_prime = [shape](double z) { return shape.rho2_prime(z); };
    profile_.rho2_second = [shape](double) { return shape.rho2_second(); };
    profile_.f = [shape](double z) { return shape.dlog_y(z); };
    profile_.f_prime = [shape](double z) { return shape.d2log_y(z); };
    profile_.rho1 = drift_from_f(profile_.f, profile_.rho2, profile_.rho2_prime, alpha);
    profile_.rho1_prime = drift_derivative_from_f(profile_.f, profile_.f_prime, profile_.rho2,
                                                  profile_.rho2_prime, profile_.rho2_second, alpha);

    // Quadrature normalization with the profile shifted by its sampled peak.
    const double span_hi = std::isfinite(geo.z_hi) ? geo.z_hi : geo.z_lo + 60.0 * z_scale_;
    const double span_lo = std::isfinite(geo.z_lo) ? geo.z_lo : geo.z_hi - 60.0 * z_scale_;
    double peak = -kInf;
    constexpr int kSamples = 2001;
    for (int i = 0; i < kSamples; ++i) {
        const double z = span_lo + (span_hi - span_lo) * (i + 0.5) / kSamples;
        peak = std::max(peak, shape_.log_y(z));
    }
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    opts.half_line_scale = z_scale_;
    const QuadratureResult mass = integrate_adaptive(
        [&](double z) {
            const double ly = shape_.log_y(z);
            return std::isfinite(ly) ? std::exp(ly - peak) : 0.0;
        },
        geo.z_lo, geo.z_hi, 1e-300, opts);
    if (!mass.converged || !(mass.value > 0.0))
        throw ConvergenceError("normalization quadrature failed");
    const double log_A_quad = -(peak + std::log(mass.value));
    quadrature_A_ = std::exp(log_A_quad);

    if (auto lm = closed_form_log_mass(params_.params)) closed_form_A_ = std::exp(-*lm);

    if (params_.kind() == ClassKind::III || !closed_form_A_) {
        norm_source_ = NormSource::quadrature;
        log_norm_A_ = log_A_quad;
    } else {
        norm_source_ = NormSource::closed_form;
        log_norm_A_ = -*closed_form_log_mass(params_.params);
    }
    norm_A_ = std::exp(log_norm_A_);
}

double SimilaritySolution::log_y_unnormalized(double z) const {
    if (!profile_.contains(z)) return -kInf;
    return shape_.log_y(z);
}

double SimilaritySolution::y(double z) const {
    const double ly = log_y_unnormalized(z);
    return std::isfinite(ly) ? std::exp(log_norm_A_ + ly) : 0.0;
}

Interval SimilaritySolution::finite_support(double tail_mass) const {
    if (std::isfinite(z_lo()) && std::isfinite(z_hi())) return {z_lo(), z_hi()};
    const bool upper_open = std::isinf(z_hi());
    const double anchor = upper_open ? z_lo() : z_hi();
    const double dir = upper_open ? 1.0 : -1.0;
    QuadratureOptions opts;
    opts.rel_tol = 1e-6;
    opts.half_line_scale = z_scale_;
    double reach = z_scale_;
    for (int iter = 0; iter < 200; ++iter) {
        const double cut = anchor + dir * reach;
        const double lo = upper_open ? cut : -kInf;
        const double hi = upper_open ? kInf : cut;
        const QuadratureResult tail =
            integrate_adaptive([this](double z) { return y(z); }, lo, hi, 1e-3 * tail_mass, opts);
        if (tail.value < tail_mass) return upper_open ? Interval{anchor, cut} : Interval{cut, anchor};
        reach *= 1.25;
    }
    throw ConvergenceError("could not locate a truncation point for the unbounded tail");
}

SimilaritySolution build_solution(double alpha, const SolutionClass& params) {
    return SimilaritySolution(alpha, params);
}

SimilaritySolution with_drift(const SimilaritySolution& sol, RealFn rho1, RealFn rho1_prime) {
    SimilaritySolution out = sol;
    out.profile_.rho1 = std::move(rho1);
    out.profile_.rho1_prime = std::move(rho1_prime);
    out.drift_overridden_ = true;
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation in (x, t)

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0)) throw DomainError("time must be positive");
}

/// rho1 where the drift_from_f composition would hit 0 * inf at a degenerate endpoint.
double drift_at(const SimilaritySolution& sol, double z) {
    const ProfileShape& s = sol.shape();
    if (sol.drift_overridden() || s.rho2(z) != 0.0) return sol.rho1(z);
    const LinearFactor& f0 = s.factors[0];
    const LinearFactor& f1 = s.factors[1];
    const double ss = f0.sign * f1.sign;
    const double f_rho2 = f0.power * ss * (z - f1.root) + f1.power * ss * (z - f0.root);
    return f_rho2 + s.rho2_prime(z) + sol.alpha() * z;
}

}  // namespace

Interval boundary_positions(const SimilaritySolution& sol, double t) {
    require_positive_time(t);
    const double p = std::pow(t, sol.alpha());
    return {sol.z_lo() * p, sol.z_hi() * p};
}

double density(const SimilaritySolution& sol, double x, double t) {
    require_positive_time(t);
    const double p = std::pow(t, sol.alpha());
    const double lo = sol.z_lo() * p;
    const double hi = sol.z_hi() * p;
    if (!(x > lo && x < hi)) return 0.0;
    return sol.y(x / p) * std::pow(t, -sol.alpha());
}

double current(const SimilaritySolution& sol, double x, double t) {
    return sol.alpha() * x * density(sol, x, t) / t;
}

double current_from_definition(const SimilaritySolution& sol, double x, double t) {
    require_positive_time(t);
    const double p = std::pow(t, sol.alpha());
    if (!(x > sol.z_lo() * p && x < sol.z_hi() * p)) return 0.0;
    const double z = x / p;
    const ScaleInvariantProfile& pr = sol.profile();
    const double yv = sol.y(z);
    const double yp = yv * pr.f(z);
    return ((pr.rho1(z) - pr.rho2_prime(z)) * yv - pr.rho2(z) * yp) / t;
}

Coefficients coefficients(const SimilaritySolution& sol, double x, double t) {
    require_positive_time(t);
    const double alpha = sol.alpha();
    const double p = std::pow(t, alpha);
    const double lo = sol.z_lo() * p;
    const double hi = sol.z_hi() * p;
    if (x < lo || x > hi) return {0.0, 0.0};
    const double z = x == lo ? sol.z_lo() : (x == hi ? sol.z_hi() : x / p);
    return {std::pow(t, alpha - 1.0) * drift_at(sol, z),
            std::pow(t, 2.0 * alpha - 1.0) * sol.rho2(z)};
}

double moment(const SimilaritySolution& sol, int k, double t) {
    require_positive_time(t);
    if (k < 0) throw DomainError("moment order must be nonnegative");
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    opts.half_line_scale = sol.z_scale();
    // Odd moments may cancel to zero; the absolute target follows the size of |z|^k.
    const Interval s = sol.finite_support();
    const double reach = std::max({std::abs(s.lo), std::abs(s.hi), sol.z_scale()});
    const QuadratureResult r = integrate_adaptive(
        [&](double z) {
            const double yv = sol.y(z);
            return yv == 0.0 ? 0.0 : std::pow(z, k) * yv;
        },
        sol.z_lo(), sol.z_hi(), 1e-14 * std::pow(reach, k), opts);
    if (!r.converged) throw ConvergenceError("moment quadrature did not converge");
    return std::pow(t, k * sol.alpha()) * r.value;
}

IdentityResidual first_integral_residual(const SimilaritySolution& sol, double z) {
    const ScaleInvariantProfile& pr = sol.profile();
    const double yv = sol.y(z);
    const double yp = yv * sol.dlog_y(z);
    const double r1 = pr.rho1(z);
    const double r2p = pr.rho2_prime(z);
    const double az = sol.alpha() * z;
    const double t1 = pr.rho2(z) * yp;
    const double t2 = (r2p - r1 + az) * yv;
    return {t1 + t2, std::abs(t1) + (std::abs(r2p) + std::abs(r1) + std::abs(az)) * std::abs(yv)};
}

IdentityResidual reduced_ode_residual(const SimilaritySolution& sol, double z) {
    const ScaleInvariantProfile& pr = sol.profile();
    const double a = sol.alpha();
    const double yv = sol.y(z);
    const double g = sol.dlog_y(z);
    const double yp = yv * g;
    const double ypp = yv * (sol.d2log_y(z) + g * g);
    const double r1 = pr.rho1(z);
    const double r1p = pr.rho1_prime(z);
    const double r2p = pr.rho2_prime(z);
    const double r2pp = pr.rho2_second(z);
    const double t1 = pr.rho2(z) * ypp;
    const double t2 = (2.0 * r2p - r1 + a * z) * yp;
    const double t3 = (r2pp - r1p + a) * yv;
    const double scale = std::abs(t1) + (2.0 * std::abs(r2p) + std::abs(r1) + std::abs(a * z)) * std::abs(yp) +
                         (std::abs(r2pp) + std::abs(r1p) + std::abs(a)) * std::abs(yv);
    return {t1 + t2 + t3, scale};
}

std::vector<double> interior_points(const SimilaritySolution& sol, std::size_t n) {
    const Interval s = sol.finite_support();
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = s.lo + (s.hi - s.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return pts;
}

// ---------------------------------------------------------------------------
// Figure parameter sets

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = {
        {"fig1", 2.0, {ClassI{1.0, 4.0, 1.0, 0.5}}, {0.3, 0.4, 0.5}},
        {"fig2", -2.0, {ClassI{1.0, 4.0, 1.0 / 3.0, 0.5}}, {1.0, 1.2, 1.4}},
        {"fig3", 2.0, {ClassI{-2.0, 4.0, 1.0, 1.0}}, {0.6, 0.8, 1.0}},
        {"fig4", 2.0, {ClassII{1.0, 1.0, 0.5, -1.0}}, {0.4, 0.6, 0.8}},
        {"fig5", 2.0, {ClassIII{0.5, 1.0, 0.5, 1.0}}, {0.5, 0.8, 1.0}},
    };
    return presets;
}

const FigurePreset& figure_preset(std::string_view name) {
    for (const FigurePreset& p : figure_presets())
        if (p.name == name) return p;
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

}  // namespace mbfpe
