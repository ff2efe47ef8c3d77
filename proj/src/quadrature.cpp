#include "mbfpe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "mbfpe/errors.hpp"

namespace mbfpe {
namespace {

// Kronrod abscissae; odd indices are the embedded Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(const F& h, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    const double fc = h(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = h(center - dx);
        f2[j] = h(center + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    resk *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err};
}

template <class F>
QuadratureResult adapt_unit(const F& h, double tol, const QuadratureOptions& opts) {
    QuadratureResult out;
    std::size_t evals = 0;
    auto counted = [&](double u) {
        ++evals;
        return h(u);
    };

    std::priority_queue<Panel> heap;
    std::vector<Panel> frozen;  // panels too narrow to split further
    double value = 0.0;
    double error = 0.0;
    for (int k = 0; k < 4; ++k) {
        Panel p = kronrod15(counted, 0.25 * k, 0.25 * (k + 1));
        value += p.value;
        error += p.error;
        heap.push(p);
    }

    std::size_t panels = heap.size();
    while (error > std::max(tol, opts.rel_tol * std::abs(value))) {
        if (heap.empty()) break;
        if (panels >= opts.max_panels) {
            out.converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        Panel left = kronrod15(counted, worst.a, mid);
        Panel right = kronrod15(counted, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    if (heap.empty() && error > std::max(tol, opts.rel_tol * std::abs(value)))
        out.converged = false;

    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        frozen.push_back(heap.top());
        heap.pop();
    }
    std::sort(frozen.begin(), frozen.end(),
              [](const Panel& x, const Panel& y) { return std::abs(x.value) < std::abs(y.value); });
    for (const Panel& p : frozen) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.abs_error_estimate = error;
    out.evaluations = evals;
    if (!std::isfinite(value)) out.converged = false;
    return out;
}

inline double smooth(double u) { return u * u * (3.0 - 2.0 * u); }
inline double smooth_jac(double u) { return 6.0 * u * (1.0 - u); }

}  // namespace

QuadratureResult integrate_adaptive(const RealFn& g, double lo, double hi, double tol,
                                    const QuadratureOptions& opts) {
    if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integration bounds are NaN");
    if (!(tol > 0.0) && !(opts.rel_tol > 0.0)) throw DomainError("tolerance must be positive");
    if (lo == hi) return {0.0, 0.0, 0, true};
    if (hi < lo) {
        QuadratureResult r = integrate_adaptive(g, hi, lo, tol, opts);
        r.value = -r.value;
        return r;
    }

    const bool smoothing = opts.endpoint_smoothing;
    auto unit_map = [smoothing](double u, double& jac) {
        if (!smoothing) {
            jac = 1.0;
            return u;
        }
        jac = smooth_jac(u);
        return smooth(u);
    };

    if (std::isinf(lo) && std::isinf(hi)) {
        QuadratureResult left = integrate_adaptive(g, lo, 0.0, 0.5 * tol, opts);
        QuadratureResult right = integrate_adaptive(g, 0.0, hi, 0.5 * tol, opts);
        return {left.value + right.value, left.abs_error_estimate + right.abs_error_estimate,
                left.evaluations + right.evaluations, left.converged && right.converged};
    }

    if (std::isfinite(lo) && std::isfinite(hi)) {
        const double width = hi - lo;
        return adapt_unit(
            [&](double u) {
                double jac;
                // Mirror the map on the upper half so x - lo and hi - x both stay exact.
                const bool upper = u > 0.5;
                const double v = unit_map(upper ? 1.0 - u : u, jac);
                if (jac == 0.0) return 0.0;
                return g(upper ? hi - width * v : lo + width * v) * width * jac;
            },
            tol, opts);
    }

    const double scale = opts.half_line_scale;
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("half_line_scale must be positive");
    const double anchor = std::isfinite(lo) ? lo : hi;
    const double sign = std::isfinite(lo) ? 1.0 : -1.0;
    return adapt_unit(
        [&](double u) {
            double jac;
            const double v = unit_map(u, jac);
            const double rest = 1.0 - v;
            if (jac == 0.0 || rest <= 0.0) return 0.0;
            const double x = anchor + sign * scale * v / rest;
            const double gx = g(x);
            if (gx == 0.0) return 0.0;
            return gx * scale / (rest * rest) * jac;
        },
        tol, opts);
}

}  // namespace mbfpe
