#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spacenorm/acceptance.hpp"
#include "spacenorm/differences.hpp"
#include "spacenorm/harness.hpp"
#include "spacenorm/lattice.hpp"
#include "spacenorm/localpoly.hpp"
#include "spacenorm/lpref.hpp"
#include "spacenorm/parallel.hpp"

#include <sstream>

namespace py = pybind11;
using namespace spacenorm;

namespace {

GridFunction grid_function_from_arrays(py::array_t<double, py::array::c_style> values,
                                       std::vector<double> origin, double spacing,
                                       py::object mask_obj) {
  GridDescriptor g;
  for (py::ssize_t i = 0; i < values.ndim(); ++i)
    g.shape.push_back(static_cast<int>(values.shape(i)));
  g.origin = std::move(origin);
  g.spacing = spacing;
  std::vector<double> vals(values.data(), values.data() + values.size());
  std::vector<std::uint8_t> mask(vals.size(), 1);
  if (!mask_obj.is_none()) {
    auto m = py::cast<py::array_t<bool, py::array::c_style | py::array::forcecast>>(mask_obj);
    if (m.size() != values.size()) throw ConfigError("mask shape mismatch");
    for (py::ssize_t i = 0; i < m.size(); ++i) mask[static_cast<std::size_t>(i)] = m.data()[i] ? 1 : 0;
  }
  return GridFunction(std::move(g), std::move(vals), std::move(mask));
}

py::array values_array(const GridFunction& f) {
  std::vector<py::ssize_t> shape(f.grid().shape.begin(), f.grid().shape.end());
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Oscillation, difference, and Littlewood-Paley quasi-norms of "
            "Besov-Morrey and Besov-type spaces for grid-sampled functions";

  py::register_exception<ConfigError>(m, "ConfigurationError");

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init(&grid_function_from_arrays), py::arg("values"), py::arg("origin"),
           py::arg("spacing"), py::arg("mask") = py::none())
      .def_property_readonly("values", &values_array)
      .def_property_readonly("spacing", &GridFunction::spacing)
      .def_property_readonly("dim", &GridFunction::dim)
      .def("save", &GridFunction::save)
      .def_static("load", &GridFunction::load)
      .def("export_csv", &GridFunction::export_csv);

  py::class_<DomainSpec>(m, "DomainSpec")
      .def_static("from_json", &DomainSpec::from_json)
      .def("to_json", &DomainSpec::to_json)
      .def("contains",
           [](const DomainSpec& d, std::vector<double> y) { return contains(d, y); });

  py::class_<TestFunctionSpec>(m, "TestFunctionSpec")
      .def_static("from_json", &TestFunctionSpec::from_json)
      .def("to_json", &TestFunctionSpec::to_json)
      .def("evaluate",
           [](const TestFunctionSpec& s, std::vector<double> y) { return s.evaluate(y); });

  py::class_<SpaceParams>(m, "SpaceParams")
      .def_static("from_json", &SpaceParams::from_json)
      .def("to_json", &SpaceParams::to_json);

  m.def("sample", [](const TestFunctionSpec& fn, const DomainSpec& dom, int grid_size) {
    return sample(fn, GridDescriptor::covering(dom.window, grid_size), dom);
  });

  m.def("set_threads", &set_thread_count);

  m.def("full_norm", [](const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
    const NormEntry e = full_norm(f, sp, dom);
    py::dict out;
    out["main_term"] = e.main;
    out["seminorm"] = e.semi;
    out["total"] = e.total;
    py::list levels;
    for (const auto& l : e.breakdown.levels) {
      py::dict lv;
      lv["j"] = l.j;
      lv["t"] = l.t;
      lv["a"] = l.a;
      levels.append(lv);
    }
    out["levels"] = levels;
    return out;
  });

  m.def("lp_norm", [](const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
    const auto dec =
        build_decomposition(std::numbers::pi / f.spacing(), default_k_max(f.grid()));
    return lp_norm(f, sp, dec, dom).value;
  });

  m.def("oscillation",
        [](const GridFunction& f, std::vector<double> x, double t, double v, int N,
           const DomainSpec& dom, const std::string& mode) {
          OscMode om = mode == "exact2"    ? OscMode::Exact2
                       : mode == "minimax" ? OscMode::Minimax
                                           : OscMode::ProjectionSurrogate;
          return oscillation(f, x, t, v, N, dom, om);
        },
        py::arg("f"), py::arg("x"), py::arg("t"), py::arg("v"), py::arg("N"), py::arg("domain"),
        py::arg("mode") = "surrogate");

  m.def("delta", [](const GridFunction& f, std::vector<int> x, std::vector<int> m_, int N) {
    return delta(f, x, m_, N);
  });

  m.def("diff_ball_mean",
        [](const GridFunction& f, std::vector<int> x, double t, double v, int N,
           const DomainSpec& dom) { return diff_ball_mean(f, x, t, v, N, dom).value; });

  m.def("morrey_ball_norm",
        [](const GridFunction& f, double p, double u, const DomainSpec& dom) {
          return morrey_ball_norm(f, MorreyParams(p, u), dom,
                                  default_radius_set(dom, f.spacing()));
        });

  m.def("run_experiment", [](const std::string& config_json) {
    const auto cfg = harness::ExperimentConfig::from_json(config_json);
    return harness::run(cfg).to_json();
  });

  m.def("regularity_scan", [](const TestFunctionSpec& fn, const SpaceParams& sp,
                              const DomainSpec& dom, std::vector<int> grids) {
    const auto r = harness::regularity_scan(fn, sp, dom, grids);
    py::dict out;
    out["threshold"] = r.threshold;
    out["slope"] = r.slope;
    out["degenerate"] = r.degenerate;
    return out;
  });

  m.def("run_acceptance", [](std::vector<int> only) {
    std::ostringstream os;
    const int failures = acceptance::run_and_print(os, only);
    return py::make_tuple(failures, os.str());
  });

  m.attr("__version__") = "1.0.0";
}
