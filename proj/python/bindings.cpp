#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmono/core.hpp"
#include "qmono/errors.hpp"
#include "qmono/frac.hpp"
#include "qmono/monotone.hpp"
#include "qmono/mvt.hpp"
#include "qmono/oracle.hpp"

namespace py = pybind11;
using namespace qmono;

PYBIND11_MODULE(_qmono, m) {
    m.doc() = "q-fractional operators on the time scale T_q";

    auto error = py::register_exception<Error>(m, "Error");
    auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<WindowError>(m, "WindowError", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<HypothesisError>(m, "HypothesisError", domain.ptr());

    py::class_<QParams>(m, "QParams")
        .def(py::init<double, double>(), py::arg("q"), py::arg("alpha") = 1.0)
        .def_property_readonly("q", &QParams::q)
        .def_property_readonly("alpha", &QParams::alpha)
        .def("with_alpha", &QParams::with_alpha);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<int, std::vector<double>>(), py::arg("n_lo"), py::arg("values"))
        .def_property_readonly("n_lo", &GridFunction::n_lo)
        .def_property_readonly("n_hi", &GridFunction::n_hi)
        .def_property_readonly("values",
                               [](const GridFunction& f) {
                                   return std::vector<double>(f.values().begin(), f.values().end());
                               })
        .def("__call__", &GridFunction::operator())
        .def("__len__", &GridFunction::size)
        .def("negated", &GridFunction::negated)
        .def("extended", &GridFunction::extended);

    py::class_<OperatorResult>(m, "OperatorResult")
        .def_readonly("value", &OperatorResult::value)
        .def_readonly("trunc_error_bound", &OperatorResult::trunc_error_bound);

    m.def("point_value", &point_value, py::arg("n"), py::arg("q"));
    m.def("q_bracket", &q_bracket, py::arg("x"), py::arg("q"));
    m.def("c_q", &c_q, py::arg("alpha"), py::arg("q"));
    m.def("q_pow_int", &q_pow_int, py::arg("t"), py::arg("s"), py::arg("n"), py::arg("q"));
    m.def("q_pow_frac", [](double t, double s, double power, double q) { return q_pow_frac(t, s, power, q); },
          py::arg("t"), py::arg("s"), py::arg("power"), py::arg("q"));
    m.def("q_gamma", [](double x, double q) { return q_gamma(x, q); }, py::arg("x"), py::arg("q"));
    m.def("nabla_q_derivative", &nabla_q_derivative, py::arg("f"), py::arg("n"), py::arg("params"));
    m.def("nabla_q_integral", &nabla_q_integral, py::arg("f"), py::arg("n_a"), py::arg("n_t"), py::arg("params"));

    m.def("q_frac_integral",
          [](const GridFunction& f, int n_start, int n_t, const QParams& p) { return q_frac_integral(f, n_start, n_t, p); },
          py::arg("f"), py::arg("n_start"), py::arg("n_t"), py::arg("params"));
    m.def("rl_q_derivative",
          [](const GridFunction& y, int n_a, int n_t, const QParams& p) { return rl_q_derivative(y, n_a, n_t, p); },
          py::arg("y"), py::arg("n_a"), py::arg("n_t"), py::arg("params"));
    m.def("caputo_q_derivative",
          [](const GridFunction& f, int n_start, int n_t, const QParams& p) {
              return caputo_q_derivative(f, n_start, n_t, p);
          },
          py::arg("f"), py::arg("n_start"), py::arg("n_t"), py::arg("params"));

    m.def("m_q", [](int n_a, int n_b, const QParams& p) { return m_q(n_a, n_b, p); }, py::arg("n_a"),
          py::arg("n_b"), py::arg("params"));
    m.def("composition_residual",
          [](const GridFunction& f, int n_a, int n_b, const QParams& p) { return composition_residual(f, n_a, n_b, p); },
          py::arg("f"), py::arg("n_a"), py::arg("n_b"), py::arg("params"));

    py::class_<MonotonicityReport>(m, "MonotonicityReport")
        .def_property_readonly("theorem", [](const MonotonicityReport& r) { return std::string(to_string(r.theorem)); })
        .def_readonly("hypotheses_hold", &MonotonicityReport::hypotheses_hold)
        .def_readonly("conclusion_holds", &MonotonicityReport::conclusion_holds)
        .def_readonly("hypothesis_margin", &MonotonicityReport::hypothesis_margin)
        .def_readonly("conclusion_margin", &MonotonicityReport::conclusion_margin)
        .def_readonly("witness_exponent", &MonotonicityReport::witness_exponent)
        .def_property_readonly("vacuous", &MonotonicityReport::vacuous)
        .def_property_readonly("counterexample", &MonotonicityReport::counterexample);

    m.def("verify_thm1",
          [](const GridFunction& y, int n0, const QParams& p) { return verify_thm1(y, n0, p); },
          py::arg("y"), py::arg("n0"), py::arg("params"));
    m.def("verify_converse",
          [](const GridFunction& y, int n0, const QParams& p, bool strict) { return verify_converse(y, n0, p, strict); },
          py::arg("y"), py::arg("n0"), py::arg("params"), py::arg("strict") = false);
    m.def("verify_corollary",
          [](const GridFunction& y, int n0, const QParams& p) { return verify_corollary(y, n0, p); },
          py::arg("y"), py::arg("n0"), py::arg("params"));

    py::class_<MvtWitnesses>(m, "MvtWitnesses")
        .def_readonly("r1_exponent", &MvtWitnesses::r1_exponent)
        .def_readonly("r2_exponent", &MvtWitnesses::r2_exponent)
        .def_readonly("quotient", &MvtWitnesses::quotient)
        .def_readonly("min_ratio", &MvtWitnesses::min_ratio)
        .def_readonly("max_ratio", &MvtWitnesses::max_ratio)
        .def("sandwich_holds", &MvtWitnesses::sandwich_holds);
    m.def("mvt_witnesses",
          [](const GridFunction& f, const GridFunction& g, int n_a, int n_b, const QParams& p) {
              return mvt_witnesses(f, g, n_a, n_b, p);
          },
          py::arg("f"), py::arg("g"), py::arg("n_a"), py::arg("n_b"), py::arg("params"));

    m.def("sample_random_grid_function",
          [](int n_lo, int n_hi, const std::string& dist, std::uint64_t seed) {
              return oracle::sample_random_grid_function({n_lo, n_hi}, oracle::parse_distribution(dist), seed);
          },
          py::arg("n_lo"), py::arg("n_hi"), py::arg("distribution"), py::arg("seed"));
    m.def("generate_thm1_instance",
          [](int n0, int n_min, const QParams& p, std::uint64_t seed) {
              return oracle::generate_thm1_instance(n0, n_min, p, seed);
          },
          py::arg("n0"), py::arg("n_min"), py::arg("params"), py::arg("seed"));
}
