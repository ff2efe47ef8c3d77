#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mbfpe/errors.hpp"
#include "mbfpe/pde_verifier.hpp"
#include "mbfpe/verify.hpp"

using namespace mbfpe;

namespace {

SimilaritySolution preset(const char* name) {
    const FigurePreset& p = figure_preset(name);
    return build_solution(p.alpha, p.params);
}

}  // namespace

TEST_CASE("grid layout") {
    const ZGrid g = ZGrid::uniform(1.0, 4.0, 30);
    CHECK(g.faces.front() == 1.0);
    CHECK(g.faces.back() == 4.0);
    CHECK(g.faces.size() == 31);
    for (std::size_t i = 0; i + 1 < g.faces.size(); ++i) {
        CHECK(g.faces[i] < g.faces[i + 1]);
        CHECK(g.faces[i + 1] - g.faces[i] == doctest::Approx(g.spacing()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ZGrid::uniform(1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(ZGrid::uniform(0.0, INFINITY, 10), DomainError);
}

TEST_CASE("bernoulli weight") {
    CHECK(bernoulli_weight(0.0) == 1.0);
    for (double w : {-30.0, -2.0, -1e-6, 1e-7, 0.3, 5.0}) {
        CHECK(bernoulli_weight(w) > 0.0);
        // B(-w) = B(w) + w
        CHECK(bernoulli_weight(-w) == doctest::Approx(bernoulli_weight(w) + w).epsilon(1e-12));
    }
}

TEST_CASE("operator is conservative") {
    const SimilaritySolution s = preset("fig1");
    const DiscreteOperator op = transformed_operator(s, solution_grid(s, 100));
    for (double c : op.column_sums()) CHECK(std::abs(c) <= 1e-14 * std::abs(op.diag()[0]) + 1e-14);
    // off-diagonals nonnegative: an M-matrix after I - ds L
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(op.lower()[i] >= 0.0);
        CHECK(op.upper()[i] >= 0.0);
        CHECK(op.diag()[i] <= 0.0);
    }
}

TEST_CASE("boundary faces carry no flux") {
    const SimilaritySolution s = preset("fig4");
    const ZGrid g = solution_grid(s, 64);
    const DiscreteOperator op = transformed_operator(s, g);
    std::vector<double> u(64);
    std::iota(u.begin(), u.end(), 1.0);
    const auto flux = op.face_fluxes(u);
    CHECK(flux.front() == 0.0);
    CHECK(flux.back() == 0.0);
}

TEST_CASE("grid must match the domain") {
    const SimilaritySolution s = preset("fig1");
    CHECK_THROWS_AS(transformed_operator(s, ZGrid::uniform(0.5, 4.0, 50)), DomainError);
    CHECK_THROWS_AS(transformed_operator(s, ZGrid::uniform(1.0, 3.5, 50)), DomainError);
    const SimilaritySolution s5 = preset("fig5");
    CHECK_NOTHROW(transformed_operator(s5, ZGrid::uniform(0.5, 20.0, 50)));
    CHECK_THROWS_AS(transformed_operator(s5, ZGrid::uniform(0.6, 20.0, 50)), DomainError);
}

TEST_CASE("sampled profile is discretely stationary") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5"}) {
        const SimilaritySolution s = preset(name);
        for (std::size_t n : {100, 200, 400}) {
            const ZGrid g = solution_grid(s, n);
            const DiscreteOperator op = transformed_operator(s, g);
            const auto y = sampled_profile(s, g);
            const double h = g.spacing();
            double ymax = 0.0;
            for (double v : y) ymax = std::max(ymax, v);
            double flux_max = 0.0;
            for (double f : op.face_fluxes(y)) flux_max = std::max(flux_max, std::abs(f));
            // scale: diffusive flux magnitude of the profile
            double rho2_max = 0.0;
            for (double z : g.faces) rho2_max = std::max(rho2_max, s.rho2(z));
            const double scale = rho2_max * ymax / (g.z_hi - g.z_lo);
            CAPTURE(name);
            CAPTURE(n);
            CHECK(flux_max <= h * h * scale);
            const auto du = op.apply(y);
            double l1 = 0.0;
            for (double v : du) l1 += std::abs(v) * h;
            CHECK(l1 <= h * h * scale);
        }
    }
}

TEST_CASE("discrete stationary state approaches cell averages") {
    const SimilaritySolution s = preset("fig3");
    const double e1 = stationary_error(s, 100);
    const double e2 = stationary_error(s, 200);
    const double e4 = stationary_error(s, 400);
    CHECK(e2 < e1);
    CHECK(e4 < e2);
    CHECK(observed_order(e1, e4) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("refinement order follows the boundary exponent") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5"}) {
        const SimilaritySolution s = preset(name);
        const double p = observed_order(stationary_error(s, 100), stationary_error(s, 400));
        CAPTURE(name);
        CHECK(std::abs(p - predicted_refinement_order(s)) <= 0.2);
    }
}

TEST_CASE("evolve keeps a stationary profile") {
    const SimilaritySolution s = preset("fig1");
    const ZGrid g = solution_grid(s, 400);
    const DiscreteOperator op = transformed_operator(s, g);
    FieldOnGrid u0;
    u0.values = sampled_profile(s, g);
    const double m = mass(g, u0.values);
    for (double& v : u0.values) v /= m;
    const FieldOnGrid end = evolve(op, u0, 3.0, 0.05);
    CHECK(l1_distance(g, end.values, sampled_profile(s, g)) <= 5e-4);
    CHECK(l1_distance(g, end.values, cell_averages(s, g)) <= 5e-4);
}

TEST_CASE("uniform start on the symmetric model conserves mass per step") {
    const SimilaritySolution s = build_solution(2.0, {ClassI{-1.0, 1.0, 1.0, 1.0}});
    const ZGrid g = solution_grid(s, 80);
    const DiscreteOperator op = transformed_operator(s, g);
    for (double ds : {1e-3, 1e-2, 0.1}) {
        const FieldOnGrid end = evolve(op, uniform_field(g), 20.0 * ds, ds);
        for (std::size_t k = 1; k < end.mass_history.size(); ++k)
            CHECK(std::abs(end.mass_history[k] - end.mass_history[k - 1]) <= 1e-14);
    }
    // Very large steps: the Thomas solve loses a few digits, still far inside 1e-12.
    for (double ds : {1.0, 10.0, 100.0}) {
        const FieldOnGrid end = evolve(op, uniform_field(g), 20.0 * ds, ds);
        CHECK(max_relative_mass_drift(end) <= 1e-12);
    }
}

TEST_CASE("attractor from three initial conditions") {
    const SimilaritySolution s = preset("fig1");
    const ZGrid g = solution_grid(s, 400);
    const DiscreteOperator op = transformed_operator(s, g);
    const auto target = cell_averages(s, g);
    std::vector<std::vector<double>> finals;
    for (const FieldOnGrid& u0 : {uniform_field(g), triangle_field(g, 0.2), triangle_field(g, 0.8)}) {
        bool nonneg = true;
        const FieldOnGrid end = evolve(op, u0, 10.0, 0.01, [&](const FieldOnGrid& f) {
            for (double v : f.values) nonneg = nonneg && v >= 0.0;
        });
        CHECK(nonneg);
        CHECK(max_relative_mass_drift(end) <= 1e-12);
        CHECK(l1_distance(g, end.values, target) <= 1e-3);
        finals.push_back(end.values);
    }
    CHECK(l1_distance(g, finals[0], finals[1]) <= 1e-3);
    CHECK(l1_distance(g, finals[0], finals[2]) <= 1e-3);
    CHECK(l1_distance(g, finals[1], finals[2]) <= 1e-3);
}

TEST_CASE("evolve rejects bad input") {
    const SimilaritySolution s = preset("fig1");
    const ZGrid g = solution_grid(s, 40);
    const DiscreteOperator op = transformed_operator(s, g);
    CHECK_THROWS_AS(evolve(op, uniform_field(g), 1.0, 0.0), DomainError);
    FieldOnGrid bad = uniform_field(g);
    bad.values[3] = -1.0;
    CHECK_THROWS_AS(evolve(op, bad, 1.0, 0.1), DomainError);
    FieldOnGrid heavy = uniform_field(g);
    for (double& v : heavy.values) v *= 2.0;
    CHECK_THROWS_AS(evolve(op, heavy, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(triangle_field(g, 1.0), DomainError);
}

TEST_CASE("FPE residual is second order") {
    struct Probe {
        const char* name;
        double t;
    };
    for (const Probe& pr : {Probe{"fig1", 0.4}, Probe{"fig4", 0.6}}) {
        const SimilaritySolution s = preset(pr.name);
        const Interval b = boundary_positions(s, pr.t);
        for (double frac : {1.0 / 3.0, 2.0 / 3.0}) {
            const double ratio = fpe_residual_ratio(s, b.lo + frac * (b.hi - b.lo), pr.t);
            CAPTURE(pr.name);
            CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
        }
    }
}

TEST_CASE("FPE residual vanishes with the step for smooth profiles") {
    const SimilaritySolution s = build_solution(1.5, {ClassI{0.5, 2.5, 2.0, 3.0}});
    const double t = 1.2;
    const Interval b = boundary_positions(s, t);
    const double mid = 0.5 * (b.lo + b.hi);
    double prev = INFINITY;
    for (double h : {0.05, 0.025, 0.0125, 0.00625}) {
        const double r = std::abs(fpe_residual_at(s, mid, t, h * (b.hi - b.lo), h * t));
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 5e-3 * density(s, mid, t));
    CHECK(residual_original_coordinates(s, 0.001 * (b.hi - b.lo), t, 0.001 * t) < 1e-3);
}
