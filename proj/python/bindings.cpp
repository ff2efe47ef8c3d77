#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbfpe/commands.hpp"
#include "mbfpe/config.hpp"
#include "mbfpe/errors.hpp"
#include "mbfpe/specfun.hpp"
#include "mbfpe/verify.hpp"

namespace py = pybind11;
using namespace mbfpe;

namespace {

py::dict config_to_dict(const RunConfig& c) {
    py::dict d;
    d["name"] = c.name;
    d["class"] = std::string(to_string(c.kind));
    d["mirrored"] = c.mirrored;
    d["alpha"] = c.alpha;
    d["z1"] = c.z1;
    d["z2"] = c.z2;
    d["a1"] = c.a1;
    d["a2"] = c.a2;
    d["beta"] = c.beta;
    d["times"] = c.times;
    d["output"] = c.output;
    d["points"] = c.points;
    d["cells"] = c.cells;
    d["paths"] = c.paths;
    d["bins"] = c.bins;
    d["steps"] = c.steps;
    d["seed"] = c.seed;
    d["log_time_span"] = c.log_time_span;
    d["ds"] = c.ds;
    return d;
}

// py::vectorize can't carry a const reference to a bound class, so map by hand.
template <class F>
py::array_t<double> map_array(py::array_t<double, py::array::c_style | py::array::forcecast> in, F f) {
    py::array_t<double> out(in.request().shape);
    const double* src = in.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(src[i]);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Similarity solutions of Fokker-Planck equations with moving boundaries";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::enum_<ClassKind>(m, "ClassKind").value("I", ClassKind::I).value("II", ClassKind::II).value("III", ClassKind::III);

    py::class_<ClassI>(m, "ClassI")
        .def(py::init<double, double, double, double>(), py::arg("z1"), py::arg("z2"), py::arg("a1"), py::arg("a2"))
        .def_readwrite("z1", &ClassI::z1)
        .def_readwrite("z2", &ClassI::z2)
        .def_readwrite("a1", &ClassI::a1)
        .def_readwrite("a2", &ClassI::a2);
    py::class_<ClassII>(m, "ClassII")
        .def(py::init<double, double, double, double>(), py::arg("z2"), py::arg("a1"), py::arg("a2"), py::arg("beta"))
        .def_readwrite("z2", &ClassII::z2)
        .def_readwrite("a1", &ClassII::a1)
        .def_readwrite("a2", &ClassII::a2)
        .def_readwrite("beta", &ClassII::beta);
    py::class_<ClassIII>(m, "ClassIII")
        .def(py::init<double, double, double, double>(), py::arg("z1"), py::arg("a1"), py::arg("a2"), py::arg("beta"))
        .def_readwrite("z1", &ClassIII::z1)
        .def_readwrite("a1", &ClassIII::a1)
        .def_readwrite("a2", &ClassIII::a2)
        .def_readwrite("beta", &ClassIII::beta);

    py::class_<SolutionClass>(m, "SolutionClass")
        .def(py::init<ClassParams, bool>(), py::arg("params"), py::arg("mirrored") = false)
        .def_readwrite("params", &SolutionClass::params)
        .def_readwrite("mirrored", &SolutionClass::mirrored)
        .def_property_readonly("kind", &SolutionClass::kind)
        .def("__eq__", [](const SolutionClass& a, const SolutionClass& b) { return a == b; });
    py::implicitly_convertible<ClassI, SolutionClass>();
    py::implicitly_convertible<ClassII, SolutionClass>();
    py::implicitly_convertible<ClassIII, SolutionClass>();

    m.def("mirror", &mirror, py::arg("params"));

    py::class_<SimilaritySolution>(m, "SimilaritySolution")
        .def_property_readonly("alpha", &SimilaritySolution::alpha)
        .def_property_readonly("z_lo", &SimilaritySolution::z_lo)
        .def_property_readonly("z_hi", &SimilaritySolution::z_hi)
        .def_property_readonly("norm_A", &SimilaritySolution::norm_A)
        .def_property_readonly("quadrature_A", &SimilaritySolution::quadrature_A)
        .def_property_readonly("closed_form_A", &SimilaritySolution::closed_form_A)
        .def_property_readonly("norm_from_quadrature",
                               [](const SimilaritySolution& s) { return s.norm_A_source() == NormSource::quadrature; })
        .def("y", [](const SimilaritySolution& s, py::array_t<double> z) {
            return map_array(z, [&](double v) { return s.y(v); });
        })
        .def("rho1", [](const SimilaritySolution& s, py::array_t<double> z) {
            return map_array(z, [&](double v) { return s.rho1(v); });
        })
        .def("rho2", [](const SimilaritySolution& s, py::array_t<double> z) {
            return map_array(z, [&](double v) { return s.rho2(v); });
        })
        .def("support", [](const SimilaritySolution& s, double tail_mass) {
            const Interval i = s.finite_support(tail_mass);
            return py::make_tuple(i.lo, i.hi);
        }, py::arg("tail_mass") = 1e-12);

    m.def("build_solution", &build_solution, py::arg("alpha"), py::arg("params"));
    m.def("density", [](const SimilaritySolution& s, double x, double t) { return density(s, x, t); },
          py::arg("sol"), py::arg("x"), py::arg("t"));
    m.def("density", [](const SimilaritySolution& s, py::array_t<double> x, double t) {
        return map_array(x, [&](double v) { return density(s, v, t); });
    }, py::arg("sol"), py::arg("x"), py::arg("t"));
    m.def("current", [](const SimilaritySolution& s, double x, double t) { return current(s, x, t); },
          py::arg("sol"), py::arg("x"), py::arg("t"));
    m.def("current", [](const SimilaritySolution& s, py::array_t<double> x, double t) {
        return map_array(x, [&](double v) { return current(s, v, t); });
    }, py::arg("sol"), py::arg("x"), py::arg("t"));
    m.def("coefficients", [](const SimilaritySolution& s, double x, double t) {
        const Coefficients c = coefficients(s, x, t);
        return py::make_tuple(c.drift, c.diffusion);
    }, py::arg("sol"), py::arg("x"), py::arg("t"));
    m.def("boundary_positions", [](const SimilaritySolution& s, double t) {
        const Interval i = boundary_positions(s, t);
        return py::make_tuple(i.lo, i.hi);
    }, py::arg("sol"), py::arg("t"));
    m.def("moment", &moment, py::arg("sol"), py::arg("k"), py::arg("t"));

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const FigurePreset& p : figure_presets()) names.push_back(p.name);
        return names;
    });
    m.def("figure_preset", [](const std::string& name) {
        const FigurePreset& p = figure_preset(name);
        return py::make_tuple(p.alpha, p.params, p.times);
    }, py::arg("name"), "Returns (alpha, params, times).");

    m.def("ln_gamma", &ln_gamma);
    m.def("beta", &mbfpe::beta);
    m.def("kummer_1f1", &kummer_1f1, py::arg("a"), py::arg("b"), py::arg("x"));
    m.def("tricomi_u", &tricomi_u, py::arg("a"), py::arg("b"), py::arg("x"));
    m.def("whittaker_w", &whittaker_w, py::arg("kappa"), py::arg("mu"), py::arg("x"));

    m.def("parse_config", [](const std::string& text) {
        py::list out;
        for (const RunConfig& c : parse_config(text, "<string>")) out.append(config_to_dict(c));
        return out;
    }, py::arg("text"));
    m.def("format_config", [](const std::string& text) {
        std::string out;
        for (const RunConfig& c : parse_config(text, "<string>")) out += format_config(c);
        return out;
    }, py::arg("text"), "Normalizes config text to the canonical written form.");

    m.def("verify", [](const SimilaritySolution& s, std::vector<double> times, std::size_t cells, std::size_t paths,
                       std::uint64_t seed) {
        VerifyOptions o;
        o.times = std::move(times);
        o.cells = cells;
        o.paths = paths;
        o.seed = seed;
        Report r;
        {
            py::gil_scoped_release release;
            r = run_verification(s, o);
        }
        py::list checks;
        for (const CheckResult& c : r.checks) {
            py::dict d;
            d["name"] = c.name;
            d["measured"] = c.measured;
            d["lo"] = c.bound == Bound::within ? py::cast(c.lo) : py::none();
            d["hi"] = c.hi;
            d["passed"] = c.passed;
            d["detail"] = c.detail;
            checks.append(d);
        }
        return py::make_tuple(r.all_passed(), checks);
    }, py::arg("sol"), py::arg("times"), py::arg("cells") = 400, py::arg("paths") = 0, py::arg("seed") = 1,
       "Returns (all_passed, checks).");

    m.def("sample_paths", [](const SimilaritySolution& s, std::size_t n, double t0, double t1, std::size_t steps,
                             std::uint64_t seed, std::size_t bins) {
        PathEnsemble e;
        Histogram h;
        {
            py::gil_scoped_release release;
            e = propagate(sample_initial(s, n, t0, seed), s, t1, (t1 - t0) / static_cast<double>(steps));
            h = histogram(e, s, bins);
        }
        py::dict d;
        d["positions"] = py::array_t<double>(static_cast<py::ssize_t>(e.positions.size()), e.positions.data());
        d["t"] = e.t;
        d["reflections"] = e.n_reflections;
        d["bin_centers"] = h.bin_centers;
        d["empirical_density"] = h.empirical_density;
        d["analytic_density"] = h.analytic_density;
        d["l1"] = h.l1();
        return d;
    }, py::arg("sol"), py::arg("n"), py::arg("t0"), py::arg("t1"), py::arg("steps") = 200, py::arg("seed") = 1,
       py::arg("bins") = 60);

    m.def("class_info", &class_info, py::arg("kind"));
}
