#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "phasekit/cli.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/hermite.hpp"
#include "phasekit/io.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/operators.hpp"
#include "phasekit/transform.hpp"
#include "phasekit/verify.hpp"

namespace py = pybind11;
using namespace phasekit;
using Complex = std::complex<double>;

namespace {

transform::Route parse_route(const std::string& r) {
  if (r == "automatic") return transform::Route::automatic;
  if (r == "closed_form") return transform::Route::closed_form;
  if (r == "quadrature") return transform::Route::quadrature;
  throw InvalidArgument("route must be automatic, closed_form or quadrature");
}

kernel::KernelArgs make_args(const PhaseIndex& left, const PhaseIndex& right) {
  return {left, right};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Harmonic phase-space wavefunctions";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<NonConvergence>(m, "NonConvergence", base);
  py::register_exception<OutOfDomain>(m, "OutOfDomain", base);
  py::register_exception<CapExceeded>(m, "CapExceeded", base);
  py::register_exception<TailTooHeavy>(m, "TailTooHeavy", base);
  py::register_exception<GridTooSmall>(m, "GridTooSmall", base);
  py::register_exception<ZeroField>(m, "ZeroField", base);
  py::register_exception<WindowSensitive>(m, "WindowSensitive", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);

  py::class_<ScaleParam>(m, "ScaleParam")
      .def(py::init<double, double>(), py::arg("a"), py::arg("hbar") = 1.0)
      .def_static("from_momentum_width", &ScaleParam::from_momentum_width, py::arg("b"),
                  py::arg("hbar") = 1.0)
      .def_property_readonly("a", &ScaleParam::a)
      .def_property_readonly("b", &ScaleParam::b)
      .def_property_readonly("hbar", &ScaleParam::hbar)
      .def("__eq__", [](const ScaleParam& x, const ScaleParam& y) { return x == y; })
      .def("__repr__", [](const ScaleParam& s) {
        std::ostringstream o;
        o << "ScaleParam(a=" << s.a() << ", hbar=" << s.hbar() << ")";
        return o.str();
      });

  py::class_<PhaseIndex>(m, "PhaseIndex")
      .def(py::init([](int n, double X, double P, const ScaleParam& s) {
             PhaseIndex idx{n, X, P, s};
             idx.validate();
             return idx;
           }),
           py::arg("n"), py::arg("X"), py::arg("P"), py::arg("scale") = ScaleParam(1.0))
      .def_readwrite("n", &PhaseIndex::n)
      .def_readwrite("X", &PhaseIndex::X)
      .def_readwrite("P", &PhaseIndex::P)
      .def_readwrite("scale", &PhaseIndex::scale)
      .def("dispersions", [](const PhaseIndex& i) {
        const auto d = dispersions(i);
        return py::make_tuple(d.variance_x, d.variance_p);
      })
      .def("__repr__", [](const PhaseIndex& i) {
        std::ostringstream o;
        o << "PhaseIndex(n=" << i.n << ", X=" << i.X << ", P=" << i.P << ", a=" << i.scale.a()
          << ", hbar=" << i.scale.hbar() << ")";
        return o.str();
      });

  m.def("hermite", py::vectorize(&hermite::eval), py::arg("n"), py::arg("x"));
  m.def("hermite_sequence", &hermite::sequence, py::arg("n_max"), py::arg("x"));

  m.def("phi", py::vectorize([](PhaseIndex i, double x) { return phi(i, x); }),
        py::arg("index"), py::arg("x"));
  m.def("phi_tilde", py::vectorize([](PhaseIndex i, double p) { return phi_tilde(i, p); }),
        py::arg("index"), py::arg("p"));

  py::class_<StateSpec>(m, "State")
      .def_static("hermite_gaussian", &StateSpec::hermite_gaussian, py::arg("index"))
      .def_static("gaussian_packet", &StateSpec::gaussian_packet, py::arg("center"),
                  py::arg("width"), py::arg("momentum") = 0.0, py::arg("hbar") = 1.0)
      .def_static("superposition", &StateSpec::superposition, py::arg("terms"))
      .def_static("sampled_grid", &StateSpec::sampled_grid, py::arg("x"), py::arg("values"),
                  py::arg("hbar") = 1.0)
      .def_static(
          "from_json",
          [](const std::string& text, const std::string& base_dir) {
            return state_from_json(Json::parse(text), base_dir);
          },
          py::arg("text"), py::arg("base_dir") = ".")
      .def("to_json", [](const StateSpec& s) { return state_to_json(s).dump(); })
      .def("__call__", py::vectorize([](StateSpec s, double x) { return s(x); }),
           py::arg("x"))
      .def("momentum",
           py::vectorize([](StateSpec s, double p) { return eval_state_momentum(s, p); }),
           py::arg("p"))
      .def("norm_squared", &StateSpec::norm_squared)
      .def_property_readonly("hbar", &StateSpec::hbar);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("X", &Spectrum::X)
      .def_readonly("P", &Spectrum::P)
      .def_readonly("scale", &Spectrum::scale)
      .def_readonly("tail_bound", &Spectrum::tail_bound)
      .def_property_readonly("amplitudes",
                             [](const Spectrum& s) {
                               return py::array_t<Complex>(
                                   static_cast<py::ssize_t>(s.amplitudes.size()),
                                   s.amplitudes.data());
                             })
      .def("norm_sum", &transform::norm_sum)
      .def("to_json", [](const Spectrum& s) { return Json(s).dump(); });

  m.def(
      "project",
      [](const StateSpec& s, const PhaseIndex& idx, const std::string& route, int gh_order) {
        transform::ProjectOptions o;
        o.route = parse_route(route);
        o.gh_order = gh_order;
        return transform::project(s, idx, o);
      },
      py::arg("state"), py::arg("index"), py::arg("route") = "automatic", py::arg("gh_order") = 0);
  m.def(
      "project_spectrum",
      [](const StateSpec& s, double X, double P, const ScaleParam& scale, int N, int workers) {
        py::gil_scoped_release release;
        return transform::project_spectrum(s, X, P, scale, N, {}, workers);
      },
      py::arg("state"), py::arg("X"), py::arg("P"), py::arg("scale"), py::arg("N"),
      py::arg("workers") = 0);
  m.def(
      "norm_integral",
      [](const StateSpec& s, int n, const ScaleParam& scale) {
        return transform::norm_integral(s, n, scale);
      },
      py::arg("state"), py::arg("n"), py::arg("scale"));
  m.def("reconstruct_sum",
        py::vectorize([](Spectrum sp, double x, double tail_tol) {
          return transform::reconstruct_sum(sp, x, tail_tol);
        }),
        py::arg("spectrum"), py::arg("x"), py::arg("tail_tol") = 1e-6);
  m.def(
      "reconstruct_integral_XP",
      [](const StateSpec& s, int n, const ScaleParam& scale, double x) {
        return transform::reconstruct_integral_XP(s, n, scale, x);
      },
      py::arg("state"), py::arg("n"), py::arg("scale"), py::arg("x"));

  m.def(
      "chi", [](const PhaseIndex& l, const PhaseIndex& r) { return kernel::chi(make_args(l, r)); },
      py::arg("left"), py::arg("right"));
  m.def(
      "chi_closed",
      [](const PhaseIndex& l, const PhaseIndex& r, int cap) {
        return kernel::chi_closed(make_args(l, r), cap);
      },
      py::arg("left"), py::arg("right"), py::arg("cap") = kernel::kDefaultClosedFormCap);
  m.def(
      "chi_quadrature",
      [](const PhaseIndex& l, const PhaseIndex& r) {
        return kernel::chi_quadrature(make_args(l, r));
      },
      py::arg("left"), py::arg("right"));
  m.def(
      "kernel_transport",
      [](const Spectrum& sp, const PhaseIndex& target, double tail_tol) {
        const auto r = kernel::kernel_transport(sp, target, tail_tol);
        return py::make_tuple(r.value, r.error_bound);
      },
      py::arg("spectrum"), py::arg("target"), py::arg("tail_tol") = 1e-8);

  m.def("matrix_p", &operators::matrix_p, py::arg("N"));
  m.def("matrix_x", &operators::matrix_x, py::arg("N"));
  m.def("matrix_reduced_dispersion", &operators::matrix_reduced_dispersion, py::arg("N"));
  m.def("matrix_dispersion", &operators::matrix_dispersion, py::arg("N"), py::arg("scale"));

  m.def(
      "_verify",
      [](const std::optional<std::string>& config_file,
         const std::vector<std::pair<std::string, std::string>>& overrides, int workers) {
        const Json cfg = cli::resolve_config(config_file, overrides);
        py::gil_scoped_release release;
        return verify::to_json(verify::run_suite(cfg, workers)).dump();
      },
      py::arg("config_file") = std::nullopt, py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
      py::arg("workers") = 0);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
