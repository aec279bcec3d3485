// Python bindings. Reports cross the boundary as the same JSON documents the
// CLI writes, decoded into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "rpnflat/cli.hpp"
#include "rpnflat/derivative_transport.hpp"
#include "rpnflat/errors.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/report_io.hpp"
#include "rpnflat/schwartz_analysis.hpp"

namespace py = pybind11;
using namespace rpnflat;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ScalarField field(const std::string& name, std::size_t n) {
  auto f = find_field(name, n);
  if (!f) throw py::value_error("unknown function '" + name + "' for n = " + std::to_string(n));
  return *f;
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

PYBIND11_MODULE(rpnflat, m) {
  m.doc() = "Projective atlas, derivative transport and Schwartz/flatness analysis";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("field_names", &field_names);

  m.def(
      "enumerate_multiindices",
      [](std::size_t n, int k) {
        std::vector<std::vector<int>> out;
        for (const auto& a : enumerate_multiindices(n, k)) out.emplace_back(a.exponents().begin(), a.exponents().end());
        return out;
      },
      py::arg("n"), py::arg("max_order"));

  m.def(
      "evaluate", [](const std::string& name, const std::vector<double>& x) { return field(name, x.size()).eval(x); },
      py::arg("function"), py::arg("x"));

  m.def(
      "partial",
      [](const std::string& name, const std::vector<double>& x, std::vector<int> alpha) {
        const MultiIndex a(std::move(alpha));
        return field(name, x.size()).eval_jet(x, a.order()).partial(a);
      },
      py::arg("function"), py::arg("x"), py::arg("alpha"));

  m.def(
      "transition",
      [](int target, int chart, const std::vector<double>& a) {
        return vec(transition(ChartId(target), AffinePoint(ChartId(chart), a)).coords());
      },
      py::arg("target"), py::arg("chart"), py::arg("coords"));

  m.def(
      "transport_matrix",
      [](int i, int j, const std::vector<double>& t) {
        return to_py(to_json(first_order_matrix(ChartId(i), AffinePoint(ChartId(j), t))));
      },
      py::arg("i"), py::arg("j"), py::arg("point"));

  m.def(
      "derivative_table",
      [](const std::string& name, int i, int j, const std::vector<double>& t, int order) {
        return to_py(to_json(pushforward_derivatives(field(name, t.size()), ChartId(i), AffinePoint(ChartId(j), t), order)));
      },
      py::arg("function"), py::arg("i"), py::arg("j"), py::arg("point"), py::arg("order") = 3);

  m.def(
      "stereo", [](const std::vector<double>& p) { return stereo(SpherePoint(p)); }, py::arg("sphere_point"));
  m.def(
      "stereo_inverse", [](const std::vector<double>& x) { return vec(stereo_inverse(x).coords()); },
      py::arg("x"));

  m.def(
      "classify",
      [](const std::string& name, std::size_t n, int max_alpha, int max_beta, std::vector<double> radii,
         std::size_t workers) {
        ClassifyConfig cfg;
        cfg.max_alpha = max_alpha;
        cfg.max_beta = max_beta;
        cfg.radii = std::move(radii);
        cfg.workers = workers;
        const auto f = field(name, n);
        nlohmann::json j;
        {
          py::gil_scoped_release release;
          j = to_json(classify_schwartz(f, cfg));
        }
        return to_py(j);
      },
      py::arg("function"), py::arg("n"), py::arg("max_alpha") = 3, py::arg("max_beta") = 3,
      py::arg("radii") = ClassifyConfig{}.radii, py::arg("workers") = 1);

  m.def(
      "verify_flatness",
      [](const std::string& name, std::vector<double> base_point, int i, int j, int levels, int samples,
         std::uint64_t seed, std::size_t workers) {
        FlatnessSpec spec;
        spec.source = ChartId(i);
        spec.target = ChartId(j);
        const auto f = field(name, base_point.size());
        spec.base_point = std::move(base_point);
        spec.levels = levels;
        spec.samples_per_level = samples;
        spec.seed = seed;
        return to_py(to_json(verify_flatness(f, spec, workers)));
      },
      py::arg("function"), py::arg("base_point"), py::arg("i") = 1, py::arg("j") = 2, py::arg("levels") = 20,
      py::arg("samples") = 256, py::arg("seed") = kDefaultSeed, py::arg("workers") = 1);

  m.def(
      "atlas_check", [](std::size_t samples) {
        AtlasCheckConfig cfg;
        cfg.samples = samples;
        return to_py(to_json(run_atlas_checks(cfg)));
      },
      py::arg("samples") = 1000);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"rpnflat"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI invocation in-process; returns (exit_code, stdout, stderr).");
}
