#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pxbih/cli.hpp"
#include "pxbih/energy.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/minimizer.hpp"
#include "pxbih/sampling.hpp"

namespace py = pybind11;
using namespace pxbih;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; Grid has no mutators, so
// the const is dropped only at the binding boundary.
using PyGrid = std::shared_ptr<Grid>;
PyGrid py_grid(const GridPtr& g) { return std::const_pointer_cast<Grid>(g); }

py::array_t<double> to_numpy(const ScalarField& f) {
  auto v = f.values();
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

ScalarField field_from(const PyGrid& grid, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  return ScalarField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

ProblemSpec make_spec(const ScalarField& p, const ScalarField& q, const ScalarField& r, double lambda,
                      PhiTag tag, double c) {
  return ProblemSpec{ExponentTriple(p, q, r), PhiModel::single(tag, p, c), lambda};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variable-exponent spaces and the singular Navier problem";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("kind") = to_string(e.kind());
      py::set_error(error, exc);
    }
  });

  py::class_<Grid, PyGrid>(m, "Grid")
      .def_static("line", [](std::size_t n, double length) { return py_grid(Grid::line(n, length)); },
                  py::arg("n"), py::arg("length") = 1.0)
      .def_static("rectangle",
                  [](std::size_t nx, std::size_t ny, double lx, double ly) {
                    return py_grid(Grid::rectangle(nx, ny, lx, ly));
                  },
                  py::arg("nx"), py::arg("ny"), py::arg("lx") = 1.0, py::arg("ly") = 1.0)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def("count", &Grid::count)
      .def("extent", &Grid::extent)
      .def("spacing", &Grid::spacing)
      .def("coords", &Grid::coords)
      .def("is_boundary", &Grid::is_boundary)
      .def_property_readonly("weights", [](const Grid& g) {
        auto w = g.weights();
        return py::array_t<double>(static_cast<py::ssize_t>(w.size()), w.data());
      })
      .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; });

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init(&field_from), py::arg("grid"), py::arg("values"))
      .def_static("constant", [](const PyGrid& g, double v) { return ScalarField::constant(g, v); })
      .def_static("sample", [](const PyGrid& g, const std::function<double(double, double)>& f) {
        return ScalarField::sample(g, f);
      })
      .def_property_readonly("grid", [](const ScalarField& f) { return py_grid(f.grid_ptr()); })
      .def_property_readonly("values", &to_numpy)
      .def("__len__", &ScalarField::size)
      .def("__getitem__", [](const ScalarField& f, std::size_t k) {
        if (k >= f.size()) throw py::index_error();
        return f[k];
      })
      .def("min", &ScalarField::min)
      .def("max", &ScalarField::max)
      .def("scaled", &ScalarField::scaled)
      .def("plus", &ScalarField::plus, py::arg("other"), py::arg("factor") = 1.0)
      .def("__eq__", [](const ScalarField& a, const ScalarField& b) { return a == b; });

  m.def("bump_profile", [](const PyGrid& g) { return bump_profile(g); });
  m.def("read_field_file", &read_field_file);
  m.def("write_field_file", &write_field_file);

  py::class_<NormResult>(m, "NormResult")
      .def_readonly("value", &NormResult::value)
      .def_readonly("iterations", &NormResult::iterations)
      .def_readonly("residual", &NormResult::residual);
  m.def("modular", &modular);
  m.def("luxemburg_norm", &luxemburg_norm, py::arg("u"), py::arg("p"),
        py::arg("tol") = kDefaultNormTolerance);
  m.def("conjugate_exponent", &conjugate_exponent);
  py::class_<HolderReport>(m, "HolderReport")
      .def_readonly("lhs", &HolderReport::lhs)
      .def_readonly("rhs", &HolderReport::rhs)
      .def_readonly("passed", &HolderReport::pass);
  m.def("holder_check", &holder_check, py::arg("u"), py::arg("v"), py::arg("p"), py::arg("tol") = 0.0);

  py::enum_<PhiTag>(m, "PhiTag")
      .value("power", PhiTag::kPower)
      .value("mean_curvature", PhiTag::kMeanCurvature)
      .value("capillarity", PhiTag::kCapillarity)
      .value("double_phase", PhiTag::kDoublePhase)
      .value("double_phase_log", PhiTag::kDoublePhaseLog);
  py::enum_<PhiFamily>(m, "PhiFamily")
      .value("power", PhiFamily::kPower)
      .value("mean_curvature", PhiFamily::kMeanCurvature)
      .value("capillarity", PhiFamily::kCapillarity);
  m.def("big_phi", &kernel::big_phi, py::arg("family"), py::arg("p"), py::arg("t"));

  py::class_<PhiModel>(m, "PhiModel")
      .def_static("single", &PhiModel::single, py::arg("tag"), py::arg("p"), py::arg("c") = 1.0,
                  py::arg("b") = std::nullopt)
      .def_property_readonly("tag", &PhiModel::tag)
      .def_property_readonly("c", &PhiModel::c)
      .def("big_phi", &PhiModel::big_phi)
      .def("flux", &PhiModel::flux);
  py::class_<PhiHypothesisReport>(m, "PhiHypothesisReport")
      .def_readonly("h3_pass", &PhiHypothesisReport::h3_pass)
      .def_readonly("h2_bounded", &PhiHypothesisReport::h2_bounded)
      .def_readonly("c_max", &PhiHypothesisReport::c_max)
      .def_readonly("violation_count", &PhiHypothesisReport::violation_count);
  m.def("verify_hypotheses", [](const PhiModel& model, std::size_t samples) {
    HypothesisOptions opt;
    opt.samples = samples;
    return verify_hypotheses(model, opt);
  }, py::arg("model"), py::arg("samples") = 20000);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init(&make_spec), py::arg("p"), py::arg("q"), py::arg("r"), py::arg("lambda_"),
           py::arg("tag") = PhiTag::kPower, py::arg("c") = 1.0)
      .def_readwrite("lambda_", &ProblemSpec::lambda)
      .def_readwrite("seed", &ProblemSpec::seed)
      .def_property_readonly("grid", [](const ProblemSpec& s) { return py_grid(s.grid_ptr()); });

  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("phi_part", &EnergyBreakdown::phi_part)
      .def_readonly("singular_part", &EnergyBreakdown::singular_part)
      .def_readonly("reaction_part", &EnergyBreakdown::reaction_part)
      .def_readonly("total", &EnergyBreakdown::total)
      .def_readonly("eps", &EnergyBreakdown::eps);
  m.def("energy", &energy, py::arg("u"), py::arg("spec"), py::arg("eps") = 0.0);
  m.def("energy_gradient", &energy_gradient, py::arg("u"), py::arg("spec"), py::arg("eps"));

  py::class_<ValleyScan>(m, "ValleyScan")
      .def_readonly("t_star", &ValleyScan::t_star)
      .def_readonly("t", &ValleyScan::t)
      .def_readonly("energy", &ValleyScan::energy);
  m.def("valley_scan", &valley_scan, py::arg("spec"), py::arg("v"), py::arg("t_grid") = default_t_grid());

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("u", &SolveResult::u)
      .def_readonly("m_hat", &SolveResult::m_hat)
      .def_readonly("norm", &SolveResult::norm)
      .def_readonly("residual", &SolveResult::residual)
      .def_readonly("message", &SolveResult::message)
      .def_property_readonly("status", [](const SolveResult& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("success", &SolveResult::success);
  m.def("solve", &solve, py::call_guard<py::gil_scoped_release>());
  m.def("minimize", &minimize, py::call_guard<py::gil_scoped_release>());

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("lambda_", &SweepRow::lambda)
      .def_readonly("m_hat", &SweepRow::m_hat)
      .def_readonly("norm", &SweepRow::norm)
      .def_readonly("residual", &SweepRow::residual)
      .def_readonly("status", &SweepRow::status)
      .def_readonly("success", &SweepRow::success);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("monotone", &SweepResult::monotone)
      .def_readonly("all_succeeded", &SweepResult::all_succeeded);
  m.def("lambda_sweep", &lambda_sweep, py::arg("base"), py::arg("lambdas"), py::arg("parallel") = true,
        py::call_guard<py::gil_scoped_release>());

  m.def("run_command",
        [](const std::string& command, const std::filesystem::path& config,
           std::optional<std::filesystem::path> out, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> field) {
          CommandLine cl{command, config, std::move(out), seed, std::move(field)};
          std::ostringstream o, e;
          const int code = run_command(cl, o, e);
          return py::make_tuple(code, o.str(), e.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out") = std::nullopt,
        py::arg("seed") = std::nullopt, py::arg("field") = std::nullopt,
        "Runs a CLI command; returns (exit_code, stdout, stderr).");
}
