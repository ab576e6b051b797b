#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuspwind/error.hpp"
#include "cuspwind/gauss.hpp"
#include "cuspwind/geometry.hpp"
#include "cuspwind/io.hpp"
#include "cuspwind/pressure.hpp"
#include "cuspwind/ratelab.hpp"
#include "cuspwind/schottky.hpp"
#include "cuspwind/special.hpp"
#include "cuspwind/spectra.hpp"

namespace py = pybind11;
using namespace cuspwind;

namespace {

Alphabet alphabet_of(bool hyperbolic_only) { return hyperbolic_only ? Alphabet::HyperbolicOnly : Alphabet::Full; }

py::dict comparability_dict(const Comparability& c) {
  py::dict d;
  d["alpha"] = c.alpha;
  d["ratio"] = c.ratio;
  d["Z_full"] = c.Z_full;
  d["Z_half"] = c.Z_half;
  d["stable"] = c.stable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cusp winding spectra of generalized Schottky groups";
  m.attr("__version__") = kVersion;

  // Leaked on purpose: the translator may run until interpreter shutdown.
  static py::handle error_type = py::exception<Error>(m, "CuspwindError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("exit_code") = exit_code(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<MobiusMap>(m, "MobiusMap")
      .def(py::init<cplx, cplx>(), py::arg("a"), py::arg("b"))
      .def_static("from_matrix", &MobiusMap::from_matrix, py::arg("m00"), py::arg("m01"), py::arg("m10"),
                  py::arg("m11"), py::arg("tol") = 1e-10)
      .def_property_readonly("a", &MobiusMap::a)
      .def_property_readonly("b", &MobiusMap::b)
      .def_property_readonly("trace", &MobiusMap::trace)
      .def("inverse", &MobiusMap::inverse)
      .def("is_identity", &MobiusMap::is_identity, py::arg("tol") = 1e-10)
      .def("__mul__", [](const MobiusMap& x, const MobiusMap& y) { return x * y; })
      .def("__call__", [](const MobiusMap& g, cplx z) { return apply(g, z); })
      .def("deriv_mod", [](const MobiusMap& g, cplx z) { return deriv_mod(g, z); })
      .def("classify", [](const MobiusMap& g) { return std::string(to_string(classify(g))); })
      .def("fixed_points", [](const MobiusMap& g) { return fixed_points(g); })
      .def("isometry_arc", [](const MobiusMap& g) { return isometry_arc(g); });

  py::class_<Arc>(m, "Arc")
      .def(py::init<double, double>(), py::arg("center"), py::arg("halfwidth"))
      .def_readonly("center", &Arc::center)
      .def_readonly("halfwidth", &Arc::halfwidth)
      .def_property_readonly("start", &Arc::start)
      .def_property_readonly("end", &Arc::end)
      .def("contains", py::overload_cast<double, double>(&Arc::contains, py::const_), py::arg("theta"),
           py::arg("tol") = 0.0)
      .def("__repr__", [](const Arc& a) {
        return "Arc(center=" + format_double(a.center) + ", halfwidth=" + format_double(a.halfwidth) + ")";
      });

  py::class_<Symbol>(m, "Symbol")
      .def_static("hyp", &Symbol::hyp, py::arg("letter"))
      .def_static("par", &Symbol::par, py::arg("sign"), py::arg("power"), py::arg("letter"))
      .def_property_readonly("is_parabolic", [](const Symbol& s) { return s.kind == Symbol::Kind::Par; })
      .def_readonly("letter", &Symbol::letter)
      .def_readonly("sign", &Symbol::sign)
      .def_readonly("power", &Symbol::power)
      .def_property_readonly("a1", &Symbol::a1)
      .def("__eq__", [](const Symbol& a, const Symbol& b) { return a == b; });

  py::class_<GeneratorSet>(m, "GeneratorSet")
      .def_property_readonly("n_hyperbolic", &GeneratorSet::n_hyperbolic)
      .def_property_readonly("num_letters", &GeneratorSet::num_letters)
      .def_property_readonly("parabolic_fixed_angle", &GeneratorSet::parabolic_fixed_angle)
      .def_property_readonly("gap", &GeneratorSet::gap)
      .def_property_readonly("Z", &GeneratorSet::Z)
      .def_property_readonly("W", &GeneratorSet::W)
      .def_property_readonly("label", &GeneratorSet::label)
      .def("map", &GeneratorSet::map, py::arg("letter"))
      .def("arc", &GeneratorSet::arc, py::arg("letter"))
      .def("letter_name", &GeneratorSet::letter_name, py::arg("letter"))
      .def("to_json", [](const GeneratorSet& G) { return group_config_json(G); })
      .def("word_to_string", [](const GeneratorSet& G, const Word& w) { return to_string(G, w); });

  m.def("example_group", &example_group, py::arg("u") = 1.0, py::arg("t") = 6.0, py::arg("lam") = 9.0);
  m.def("validate_generators", &validate_generators, py::arg("hyperbolic"), py::arg("parabolic"));
  m.def("group_from_json", [](const std::string& text) { return build_group(parse_group_config(text)); });
  m.def("encode", &encode, py::arg("group"), py::arg("theta"), py::arg("depth"));
  m.def("cylinder_arc", &cylinder_arc, py::arg("group"), py::arg("word"));
  m.def(
      "cylinder_bounds",
      [](const GeneratorSet& G, const Word& w) {
        const CylinderBounds b = cylinder_bounds(G, w);
        return py::make_tuple(b.log_deriv_inf, b.log_deriv_sup, b.a1_sum);
      },
      py::arg("group"), py::arg("word"));
  m.def("element", py::overload_cast<const GeneratorSet&, const Word&>(&element), py::arg("group"), py::arg("word"));

  py::class_<PressureEstimate>(m, "PressureEstimate")
      .def_readonly("lower", &PressureEstimate::lower)
      .def_readonly("upper", &PressureEstimate::upper)
      .def_readonly("value", &PressureEstimate::value)
      .def_readonly("n", &PressureEstimate::n)
      .def_readonly("L", &PressureEstimate::L)
      .def_readonly("tail_bound", &PressureEstimate::tail_bound);

  m.def(
      "pressure",
      [](const GeneratorSet& G, double alpha, double q, double b, int n, int L, bool hyperbolic_only) {
        return pressure(G, {alpha, q, b}, n, L, alphabet_of(hyperbolic_only));
      },
      py::arg("group"), py::arg("alpha"), py::arg("q"), py::arg("b"), py::arg("n") = kDefaultWordLength,
      py::arg("L") = kDefaultTruncation, py::arg("hyperbolic_only") = false);
  m.def(
      "bowen_dimension",
      [](const GeneratorSet& G, double tol, int n, int L, bool hyperbolic_only) {
        py::gil_scoped_release release;
        const DimensionResult d = bowen_dimension(G, tol, n, L, alphabet_of(hyperbolic_only));
        return std::make_tuple(d.s, d.lower, d.upper);
      },
      py::arg("group"), py::arg("tol") = 1e-12, py::arg("n") = kDefaultWordLength, py::arg("L") = kDefaultTruncation,
      py::arg("hyperbolic_only") = false);

  py::class_<SpectrumPoint>(m, "SpectrumPoint")
      .def(py::init<>())
      .def_readwrite("alpha", &SpectrumPoint::alpha)
      .def_readwrite("q", &SpectrumPoint::q)
      .def_readwrite("b", &SpectrumPoint::b)
      .def_readwrite("lyapunov", &SpectrumPoint::lyapunov)
      .def_readwrite("residual_p", &SpectrumPoint::residual_p)
      .def_readwrite("residual_dq", &SpectrumPoint::residual_dq)
      .def_readwrite("n_used", &SpectrumPoint::n_used)
      .def_readwrite("L_used", &SpectrumPoint::L_used);

  m.def(
      "solve_spectrum",
      [](const GeneratorSet& G, double alpha, double tol, int n, int L) {
        py::gil_scoped_release release;
        return solve_spectrum(G, alpha, tol, n, L);
      },
      py::arg("group"), py::arg("alpha"), py::arg("tol") = 1e-6, py::arg("n") = kDefaultWordLength,
      py::arg("L") = kDefaultTruncation);
  m.def(
      "spectrum_grid",
      [](const GeneratorSet& G, const std::vector<double>& alphas, double tol, int n, int L) {
        std::vector<GridEntry> out;
        {
          py::gil_scoped_release release;
          out = spectrum_grid(G, alphas, tol, n, L);
        }
        py::list res;
        for (const GridEntry& e : out) {
          if (e.point) {
            res.append(py::cast(*e.point));
          } else {
            res.append(py::none());
          }
        }
        return res;
      },
      py::arg("group"), py::arg("alphas"), py::arg("tol") = 1e-6, py::arg("n") = kDefaultWordLength,
      py::arg("L") = kDefaultTruncation);

  m.def("critical_exponent", &critical_exponent, py::arg("s"));
  m.def(
      "rate_fit",
      [](const std::vector<SpectrumPoint>& grid, double s) {
        const RateReport r = rate_fit(grid, s, false);
        py::dict d;
        d["s"] = r.s;
        d["fitted_exponent"] = r.fitted_exponent;
        d["fit_r2"] = r.fit_r2;
        d["critical_exponent"] = r.critical_exponent;
        d["relative_error"] = r.relative_error;
        d["stable"] = r.stable;
        d["instability"] = r.instability;
        d["below_decreasing"] = r.below_decreasing;
        d["above_increasing"] = r.above_increasing;
        d["q_slope"] = r.q_slope;
        d["Z"] = comparability_dict(r.q_alpha);
        d["B"] = comparability_dict(r.sb_integral.table);
        d["C"] = comparability_dict(r.dirichlet);
        return d;
      },
      py::arg("grid"), py::arg("s"));

  m.def("gamma", &gamma_fn, py::arg("x"));
  m.def("zeta", &zeta_fn, py::arg("s"));
  m.def("expint", &expint_general, py::arg("s"), py::arg("x"));
  m.def("dirichlet_K", py::overload_cast<double, double, double>(&dirichlet_K), py::arg("b"), py::arg("q"),
        py::arg("rel_tol") = 1e-14);
  m.def("mellin_principal", &mellin_principal, py::arg("b"), py::arg("q"));

  m.def("gauss_dim_restricted", &gauss_dim_restricted, py::arg("nmax"), py::arg("tol") = 1e-12);
  m.def("hensley_two_term", &hensley_two_term, py::arg("n"));
  m.def("gauss_spectrum", &gauss_spectrum, py::arg("alpha"), py::arg("tol") = 1e-6,
        py::arg("n") = kDefaultWordLength, py::arg("L") = kDefaultTruncation);

  m.def("parse_grid", &parse_grid, py::arg("spec"));
}
