#include "pssc/driver.hpp"
#include "pssc/errors.hpp"
#include "pssc/io.hpp"
#include "pssc/metrics.hpp"
#include "pssc/rng.hpp"
#include "pssc/solver.hpp"
#include "pssc/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

pssc::DataMatrix prepare(const pssc::Matrix& X, int clusters, bool normalize) {
  return pssc::validate_dataset(pssc::DataMatrix(X), clusters, normalize);
}

py::tuple generate(int clusters, int ambient, int dim, double intersect, int points,
                   std::uint64_t seed) {
  const int s = pssc::intersection_dim_for(intersect, dim);
  const auto model = pssc::generate_subspaces(clusters, ambient, dim, s, points,
                                              pssc::derive_seed(seed, {1}));
  auto data = pssc::sample_points(model, pssc::derive_seed(seed, {2}));
  return py::make_tuple(std::move(data.X), std::move(data.truth));
}

}  // namespace

PYBIND11_MODULE(_pssc, m) {
  m.doc() = "Probabilistic sparse subspace clustering";

  py::register_exception<pssc::Error>(m, "Error", PyExc_ValueError);

  py::enum_<pssc::SpectralMode>(m, "SpectralMode")
      .value("full", pssc::SpectralMode::full)
      .value("incremental", pssc::SpectralMode::incremental);

  py::class_<pssc::HyperParams>(m, "HyperParams")
      .def(py::init<>())
      .def_readwrite("alpha", &pssc::HyperParams::alpha)
      .def_readwrite("lambda_ratio", &pssc::HyperParams::lambda_ratio)
      .def_readwrite("t_max", &pssc::HyperParams::t_max)
      .def_readwrite("solver_tol", &pssc::HyperParams::solver_tol)
      .def_readwrite("solver_max_sweeps", &pssc::HyperParams::solver_max_sweeps)
      .def_readwrite("kmeans_restarts", &pssc::HyperParams::kmeans_restarts)
      .def_readwrite("seed", &pssc::HyperParams::seed)
      .def_readwrite("spectral_mode", &pssc::HyperParams::spectral_mode)
      .def_readwrite("early_stop", &pssc::HyperParams::early_stop)
      .def_readwrite("workers", &pssc::HyperParams::workers)
      .def("to_dict", [](const pssc::HyperParams& p) {
        return py::module_::import("json").attr("loads")(pssc::params_to_json(p).dump());
      });

  py::class_<pssc::IterationRecord>(m, "IterationRecord")
      .def_readonly("t", &pssc::IterationRecord::t)
      .def_readonly("kappa", &pssc::IterationRecord::kappa)
      .def_readonly("omega", &pssc::IterationRecord::omega)
      .def_readonly("objective", &pssc::IterationRecord::objective)
      .def_readonly("labels", &pssc::IterationRecord::labels);

  py::class_<pssc::ClusteringResult>(m, "ClusteringResult")
      .def_readonly("labels", &pssc::ClusteringResult::labels)
      .def_readonly("iterations", &pssc::ClusteringResult::iterations)
      .def_readonly("history", &pssc::ClusteringResult::history)
      .def_readonly("rank_guard_tripped", &pssc::ClusteringResult::rank_guard_tripped)
      .def_readonly("warnings", &pssc::ClusteringResult::warnings)
      .def_readonly("Z", &pssc::ClusteringResult::Z)
      .def_property_readonly("stop_reason", [](const pssc::ClusteringResult& r) {
        return std::string(pssc::to_string(r.stop_reason));
      });

  m.def(
      "run",
      [](const pssc::Matrix& X, int clusters, const pssc::HyperParams& params, bool normalize) {
        const auto data = prepare(X, clusters, normalize);
        py::gil_scoped_release release;
        return pssc::run(data, clusters, params);
      },
      py::arg("X"), py::arg("clusters"), py::arg("params") = pssc::HyperParams{},
      py::arg("normalize") = true);

  m.def(
      "run_ssc_baseline",
      [](const pssc::Matrix& X, int clusters, const pssc::HyperParams& params, bool normalize) {
        const auto data = prepare(X, clusters, normalize);
        py::gil_scoped_release release;
        return pssc::run_ssc_baseline(data, clusters, params);
      },
      py::arg("X"), py::arg("clusters"), py::arg("params") = pssc::HyperParams{},
      py::arg("normalize") = true);

  m.def("generate", &generate, py::arg("clusters"), py::arg("ambient") = 200,
        py::arg("dim") = 10, py::arg("intersect") = 0.5, py::arg("points") = 100,
        py::arg("seed") = 0,
        "Returns (X, truth): points from intersecting subspaces, one per column.");

  m.def("misclassification", &pssc::misclassification, py::arg("pred"), py::arg("truth"),
        py::arg("clusters"));
  m.def("ssr_error", &pssc::ssr_error, py::arg("Z"), py::arg("truth"), py::arg("clusters"));
  m.def("similarity", &pssc::similarity_from_coefficients, py::arg("Z"));
  m.def(
      "lambda0", [](const pssc::Matrix& X, double alpha) {
        return pssc::compute_lambda0(pssc::DataMatrix(X), alpha);
      },
      py::arg("X"), py::arg("alpha") = 20.0);

  m.attr("__version__") = PSSC_VERSION;
}
