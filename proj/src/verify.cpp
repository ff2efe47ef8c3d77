#include "mbfpe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "mbfpe/errors.hpp"
#include "mbfpe/pde_verifier.hpp"
#include "mbfpe/quadrature.hpp"
#include "mbfpe/sde_sampler.hpp"

namespace mbfpe {
namespace {

CheckResult upper_bound(std::string name, double measured, double limit, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = Bound::at_most;
    c.hi = limit;
    c.passed = std::isfinite(measured) && measured <= limit;
    c.detail = std::move(detail);
    return c;
}

CheckResult window(std::string name, double measured, double lo, double hi, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = Bound::within;
    c.lo = lo;
    c.hi = hi;
    c.passed = std::isfinite(measured) && measured >= lo && measured <= hi;
    c.detail = std::move(detail);
    return c;
}

// A check that threw is reported as failed under its own name.
void guarded(Report& report, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        CheckResult c;
        c.name = name;
        c.measured = std::numeric_limits<double>::quiet_NaN();
        c.passed = false;
        c.detail = std::string("error: ") + e.what();
        report.checks.push_back(std::move(c));
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

FieldOnGrid normalized(const ZGrid& grid, std::vector<double> values) {
    const double m = mass(grid, values);
    for (double& v : values) v /= m;
    FieldOnGrid f;
    f.values = std::move(values);
    return f;
}

}  // namespace

bool Report::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void Report::print(std::ostream& os) const {
    for (const CheckResult& c : checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << fmt(c.measured);
        if (c.bound == Bound::at_most)
            os << "  threshold<=" << fmt(c.hi);
        else
            os << "  window=[" << fmt(c.lo) << ", " << fmt(c.hi) << "]";
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; });
    os << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
}

double total_probability(const SimilaritySolution& sol, double t) {
    const Interval b = boundary_positions(sol, t);
    const double p = std::pow(t, sol.alpha());
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    opts.half_line_scale = sol.z_scale() * std::abs(p);
    const QuadratureResult r =
        integrate_adaptive([&](double x) { return density(sol, x, t); }, b.lo, b.hi, 1e-15, opts);
    if (!r.converged) throw ConvergenceError("normalization quadrature did not converge");
    return r.value;
}

IdentityResidual current_consistency(const SimilaritySolution& sol, double x, double t) {
    const double j = current(sol, x, t);
    const double jd = current_from_definition(sol, x, t);
    const double p = std::pow(t, sol.alpha());
    const double z = x / p;
    const ScaleInvariantProfile& pr = sol.profile();
    const double yv = sol.y(z);
    const double terms = (std::abs((pr.rho1(z) - pr.rho2_prime(z)) * yv) + std::abs(pr.rho2(z) * yv * pr.f(z))) / t;
    return {std::abs(j - jd), terms + std::abs(j)};
}

double max_scaled_residual(const SimilaritySolution& sol, std::size_t n,
                           IdentityResidual (*identity)(const SimilaritySolution&, double)) {
    double worst = 0.0;
    for (double z : interior_points(sol, n)) {
        const IdentityResidual r = identity(sol, z);
        if (r.scale > 0.0) worst = std::max(worst, std::abs(r.residual) / r.scale);
    }
    return worst;
}

double fpe_residual_ratio(const SimilaritySolution& sol, double x, double t) {
    const Interval s = sol.finite_support();
    const double width = (s.hi - s.lo) * std::pow(t, sol.alpha());
    const double h = 0.02 * width;
    const double dt = 0.02 * t;
    const double coarse = std::abs(fpe_residual_at(sol, x, t, h, dt));
    const double fine = std::abs(fpe_residual_at(sol, x, t, 0.5 * h, 0.5 * dt));
    return coarse / fine;
}

double stationary_error(const SimilaritySolution& sol, std::size_t cells) {
    const ZGrid grid = solution_grid(sol, cells);
    const DiscreteOperator op = transformed_operator(sol, grid);
    return l1_distance(grid, op.stationary_state(), cell_averages(sol, grid));
}

double observed_order(double e_quarter, double e_full) {
    return 0.5 * (std::log2(e_quarter) - std::log2(e_full));
}

double predicted_refinement_order(const SimilaritySolution& sol) {
    double a_min = std::numeric_limits<double>::infinity();
    for (double end : {sol.z_lo(), sol.z_hi()}) {
        if (!std::isfinite(end)) continue;
        double a = 0.0;
        for (const LinearFactor& fac : sol.shape().factors)
            if (fac.root == end) a += fac.power;
        a_min = std::min(a_min, a);
    }
    return std::min(2.0, 1.0 + a_min);
}

AttractorRun run_attractor(const SimilaritySolution& sol, std::size_t cells, double span, double ds,
                           std::ostream* diagnostics) {
    const ZGrid grid = solution_grid(sol, cells);
    const DiscreteOperator op = transformed_operator(sol, grid);
    const std::vector<double> target = cell_averages(sol, grid);
    EvolveObserver observer;
    if (diagnostics) {
        *diagnostics << "s,mass,l1_to_profile\n";
        diagnostics->precision(17);
        observer = [&](const FieldOnGrid& f) {
            *diagnostics << f.time_s << ',' << f.mass_history.back() << ','
                         << l1_distance(grid, f.values, target) << '\n';
        };
    }
    const FieldOnGrid end = evolve(op, uniform_field(grid), span, ds, observer);
    AttractorRun run;
    run.l1_to_profile = l1_distance(grid, end.values, target);
    run.max_mass_drift = max_relative_mass_drift(end);
    run.final_values = end.values;
    return run;
}

Report run_verification(const SimilaritySolution& sol, const VerifyOptions& opts) {
    if (opts.times.empty()) throw DomainError("verification needs at least one time");
    Report report;

    guarded(report, "normalization", [&] {
        double worst = 0.0;
        for (double t : opts.times) worst = std::max(worst, std::abs(total_probability(sol, t) - 1.0));
        report.checks.push_back(upper_bound("normalization", worst, opts.norm_tol,
                                            "max |int W dx - 1| over " + std::to_string(opts.times.size()) + " times"));
    });

    guarded(report, "norm_constant", [&] {
        const auto closed = sol.closed_form_A();
        if (!closed) throw DomainError("no closed-form constant for this class");
        const double rel = std::abs(*closed - sol.quadrature_A()) / std::abs(sol.quadrature_A());
        const double tol = sol.class_params().kind() == ClassKind::III ? 1e-8 : 1e-10;
        report.checks.push_back(upper_bound("norm_constant", rel, tol, "closed form vs quadrature, relative"));
    });

    guarded(report, "first_integral", [&] {
        report.checks.push_back(upper_bound("first_integral",
                                            max_scaled_residual(sol, opts.identity_points, first_integral_residual),
                                            opts.identity_tol, "residual / local scale"));
    });

    guarded(report, "reduced_ode", [&] {
        report.checks.push_back(upper_bound("reduced_ode",
                                            max_scaled_residual(sol, opts.identity_points, reduced_ode_residual),
                                            opts.identity_tol, "residual / local scale"));
    });

    guarded(report, "current", [&] {
        double worst = 0.0;
        for (double t : opts.times) {
            const double p = std::pow(t, sol.alpha());
            for (double z : interior_points(sol, 200)) {
                const IdentityResidual r = current_consistency(sol, z * p, t);
                if (r.scale > 0.0) worst = std::max(worst, r.residual / r.scale);
            }
        }
        report.checks.push_back(upper_bound("current", worst, opts.identity_tol, "alpha x W / t vs D1 W - (D2 W)'"));
    });

    const double t_mid = opts.times[opts.times.size() / 2];
    for (int k : {1, 2}) {
        const std::string name = "fpe_ratio_" + std::to_string(k) + "/3";
        guarded(report, name, [&] {
            const Interval s = sol.finite_support();
            const double x = (s.lo + (s.hi - s.lo) * k / 3.0) * std::pow(t_mid, sol.alpha());
            report.checks.push_back(
                window(name, fpe_residual_ratio(sol, x, t_mid), 3.6, 4.4, "t=" + fmt(t_mid) + " x=" + fmt(x)));
        });
    }

    double worst_drift = 0.0;
    guarded(report, "pde_stationary", [&] {
        const ZGrid grid = solution_grid(sol, opts.cells);
        const DiscreteOperator op = transformed_operator(sol, grid);
        const FieldOnGrid end = evolve(op, normalized(grid, sampled_profile(sol, grid)), opts.log_time_span, opts.ds);
        worst_drift = std::max(worst_drift, max_relative_mass_drift(end));
        report.checks.push_back(upper_bound("pde_stationary", l1_distance(grid, end.values, cell_averages(sol, grid)),
                                            opts.stationary_tol, "start at sampled y, " + std::to_string(opts.cells) + " cells"));
    });

    guarded(report, "pde_attractor", [&] {
        const AttractorRun run = run_attractor(sol, opts.cells, opts.log_time_span, opts.ds);
        worst_drift = std::max(worst_drift, run.max_mass_drift);
        report.checks.push_back(upper_bound("pde_attractor", run.l1_to_profile, opts.pde_l1_tol,
                                            "uniform start, span " + fmt(opts.log_time_span)));
    });
    report.checks.push_back(upper_bound("pde_mass_drift", worst_drift, opts.mass_drift_tol, "max per step"));

    guarded(report, "refinement_order", [&] {
        const double e4 = stationary_error(sol, opts.cells / 4);
        const double e2 = stationary_error(sol, opts.cells / 2);
        const double e1 = stationary_error(sol, opts.cells);
        const double expected = predicted_refinement_order(sol);
        report.checks.push_back(window("refinement_order", observed_order(e4, e1), expected - 0.2,
                                       expected + 0.2,
                                       "errors " + fmt(e4) + ", " + fmt(e2) + ", " + fmt(e1) + "; expected " + fmt(expected)));
    });

    if (opts.paths > 0) {
        guarded(report, "sde_histogram", [&] {
            const double t1 = opts.times.back();
            const double t0 = opts.times.size() > 1 ? opts.times.front() : 0.6 * t1;
            StepOptions step;
            step.workers = opts.workers;
            PathEnsemble ens = sample_initial(sol, opts.paths, t0, opts.seed);
            ens = propagate(std::move(ens), sol, t1, (t1 - t0) / static_cast<double>(opts.steps), step);
            report.checks.push_back(upper_bound("sde_histogram", histogram_distance(ens, sol, opts.bins), opts.sde_l1_tol,
                                                std::to_string(opts.paths) + " paths, t " + fmt(t0) + " -> " + fmt(t1)));
        });
    }
    return report;
}

}  // namespace mbfpe
