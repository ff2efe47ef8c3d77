#include "mbfpe/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mbfpe/errors.hpp"

namespace mbfpe {

void write_eval_csv(std::ostream& os, const SimilaritySolution& sol, const RunConfig& cfg) {
    if (cfg.points < 2) throw DomainError("eval needs at least two points per curve");
    const Interval s = sol.finite_support();
    const auto old_precision = os.precision(17);
    os << "t,x,W,J,D1,D2\n";
    for (double t : cfg.times) {
        const double p = std::pow(t, sol.alpha());
        const double x_lo = std::min(s.lo * p, s.hi * p);
        const double x_hi = std::max(s.lo * p, s.hi * p);
        const auto n = static_cast<double>(cfg.points - 1);
        for (std::size_t i = 0; i < cfg.points; ++i) {
            const double x = i + 1 == cfg.points ? x_hi : x_lo + (x_hi - x_lo) * static_cast<double>(i) / n;
            const Coefficients c = coefficients(sol, x, t);
            os << t << ',' << x << ',' << density(sol, x, t) << ',' << current(sol, x, t) << ',' << c.drift << ','
               << c.diffusion << '\n';
        }
    }
    os.precision(old_precision);
}

VerifyOptions verify_options(const RunConfig& cfg) {
    VerifyOptions o;
    o.times = cfg.times;
    o.cells = cfg.cells;
    o.log_time_span = cfg.log_time_span;
    o.ds = cfg.ds;
    o.paths = cfg.paths;
    o.bins = cfg.bins;
    o.steps = cfg.steps;
    o.seed = cfg.seed;
    o.norm_tol = cfg.norm_tol;
    o.identity_tol = cfg.identity_tol;
    o.pde_l1_tol = cfg.pde_l1_tol;
    o.sde_l1_tol = cfg.sde_l1_tol;
    return o;
}

SampleRun run_sample(const SimilaritySolution& sol, const RunConfig& cfg, unsigned workers) {
    if (cfg.times.empty()) throw DomainError("sample needs at least one time");
    SampleRun run;
    run.t_end = cfg.times.back();
    run.t_start = cfg.times.size() > 1 ? cfg.times.front() : 0.6 * run.t_end;
    const std::size_t n = cfg.paths > 0 ? cfg.paths : 1000;
    StepOptions step;
    step.workers = workers;
    PathEnsemble ens = sample_initial(sol, n, run.t_start, cfg.seed);
    ens = propagate(std::move(ens), sol, run.t_end, (run.t_end - run.t_start) / static_cast<double>(cfg.steps), step);
    run.histogram = histogram(ens, sol, cfg.bins);
    run.distance = run.histogram.l1();
    run.reflections = ens.n_reflections;
    return run;
}

std::string class_info(ClassKind kind) {
    std::ostringstream os;
    switch (kind) {
        case ClassKind::I:
            os << "class I: two moving boundaries z1 t^alpha <= x <= z2 t^alpha\n"
               << "  f(z)    = a1/(z - z1) - a2/(z2 - z)\n"
               << "  rho2(z) = (z - z1)(z2 - z)\n"
               << "  rho1(z) = (alpha - a1 - a2 - 2) z + (a1 + 1) z2 + (a2 + 1) z1\n"
               << "  y(z)    = A (z - z1)^a1 (z2 - z)^a2\n"
               << "  A       = 1 / [ (z2 - z1)^(a1+a2+1) B(a1+1, a2+1) ]\n"
               << "  domain  : z1 <= z <= z2\n"
               << "  require : z1 < z2, a1 > 0, a2 > 0, alpha != 0\n"
               << "  subclasses: (i) z1, z2 same sign; (ii) one endpoint at 0; (iii) z1 < 0 < z2\n"
               << "  mirror  : (z1, z2, a1, a2) -> (-z2, -z1, a2, a1)\n";
            break;
        case ClassKind::II:
            os << "class II: fixed boundary at x = 0, moving boundary at z2 t^alpha\n"
               << "  f(z)    = a1/z - a2/(z2 - z) + beta\n"
               << "  rho2(z) = z (z2 - z)\n"
               << "  rho1(z) = -beta z^2 + (alpha - a1 - a2 - 2 + beta z2) z + (a1 + 1) z2\n"
               << "  y(z)    = A z^a1 (z2 - z)^a2 exp(beta z)\n"
               << "  A       = 1 / [ z2^(a1+a2+1) B(a1+1, a2+1) 1F1(a1+1; a1+a2+2; beta z2) ]\n"
               << "            (1F1 is the Kummer confluent hypergeometric function)\n"
               << "  domain  : 0 <= z <= z2\n"
               << "  require : z2 > 0, a1 > 0, a2 > 0, beta real, alpha != 0\n"
               << "  mirror  : set mirrored = true for the image on x <= 0\n";
            break;
        case ClassKind::III:
            os << "class III: moving boundary at z1 t^alpha, x = +infinity fixed\n"
               << "  f(z)    = a1/(z - z1) + a2/z - beta\n"
               << "  rho2(z) = (z - z1) z\n"
               << "  rho1(z) = -beta z^2 + (alpha + a1 + a2 + 2 + beta z1) z - (a2 + 1) z1\n"
               << "  y(z)    = A (z - z1)^a1 z^a2 exp(-beta z)\n"
               << "  A       = 1 / [ beta^(-(a1+a2+2)/2) z1^((a1+a2)/2) Gamma(a1+1) exp(-beta z1/2)\n"
               << "                  W_{(a2-a1)/2, -(a1+a2+1)/2}(beta z1) ]   (Whittaker W)\n"
               << "            for z1 = 0: A = beta^(a1+a2+1) / Gamma(a1+a2+1)\n"
               << "  domain  : z >= z1\n"
               << "  require : z1 >= 0, a1 > 0, a2 > 0, beta > 0, alpha != 0\n"
               << "  mirror  : set mirrored = true for the image on x <= 0\n"
               << "  known typos in the usual printed form:\n"
               << "    f is printed with -a2/z2; the printed rho1 and y(z) require +a2/z.\n"
               << "    the Whittaker argument is printed as beta z2; it must be beta z1 (class III has no z2).\n"
               << "  A is computed by quadrature; the closed form above is reported as a cross-check.\n";
            break;
    }
    return os.str();
}

std::string presets_listing() {
    std::ostringstream os;
    for (const FigurePreset& p : figure_presets()) {
        const RunConfig c = config_from_preset(p);
        os << p.name << "  class " << to_string(c.kind) << "  alpha=" << c.alpha;
        if (c.z1) os << " z1=" << *c.z1;
        if (c.z2) os << " z2=" << *c.z2;
        os << " a1=" << *c.a1 << " a2=" << *c.a2;
        if (c.beta) os << " beta=" << *c.beta;
        os << "  t=";
        for (std::size_t i = 0; i < c.times.size(); ++i) os << (i ? "," : "") << c.times[i];
        os << '\n';
    }
    return os.str();
}

}  // namespace mbfpe
