#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttgp/amen.hpp"
#include "ttgp/experiment.hpp"
#include "ttgp/krylov.hpp"
#include "ttgp/tt_io.hpp"

namespace py = pybind11;
using namespace ttgp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

TTTensor from_array(const Array& a, double tol) {
  std::vector<Index> sizes(a.shape(), a.shape() + a.ndim());
  std::vector<double> v(a.data(), a.data() + a.size());
  return tt_from_full(DenseTensor(sizes, std::move(v)), {tol});
}

Array to_array(const TTTensor& t) {
  const DenseTensor d = tt_to_full(t);
  std::vector<py::ssize_t> shape(d.sizes.begin(), d.sizes.end());
  Array out(shape);
  std::copy(d.values.begin(), d.values.end(), out.mutable_data());
  return out;
}

HyperParams params_from(const std::string& json) { return nlohmann::json::parse(json).get<HyperParams>(); }

GridDesign grid_from(const std::vector<std::vector<double>>& points) {
  GridDesign g{points};
  g.validate();
  return g;
}

TrainOptions train_from(const std::string& json) {
  const auto j = nlohmann::json::parse(json);
  TrainOptions o;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k == "probes") o.probes = it->get<Index>();
    else if (k == "kryltol") o.kryltol = it->get<double>();
    else if (k == "amentol") o.amentol = it->get<double>();
    else if (k == "trunctol") o.trunctol = it->get<double>();
    else if (k == "krylov_maxit") o.krylov_maxit = it->get<int>();
    else if (k == "max_iter") o.max_iter = it->get<int>();
    else if (k == "grad_tol") o.grad_tol = it->get<double>();
    else if (k == "time_limit_s") o.time_limit_s = it->get<double>();
    else if (k == "seed") o.seed = it->get<std::uint64_t>();
    else if (k == "gradient") {
      const auto g = it->get<std::string>();
      if (g != "block" && g != "projected") throw std::invalid_argument("unknown gradient method: " + g);
      o.gradient = g == "block" ? GradientMethod::block : GradientMethod::projected;
    } else if (k == "policy") {
      const auto p = it->get<std::string>();
      if (p != "frozen" && p != "resample") throw std::invalid_argument("unknown probe policy: " + p);
      o.policy = p == "frozen" ? ProbePolicy::frozen : ProbePolicy::resample;
    } else {
      throw std::invalid_argument("unknown training option: " + k);
    }
  }
  o.validate();
  return o;
}

}  // namespace

PYBIND11_MODULE(_ttgp, m) {
  m.doc() = "Tensor-train GP hyperparameter training";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);

  py::class_<TTTensor>(m, "TTTensor")
      .def_static("from_array", &from_array, py::arg("array"), py::arg("tol") = 0.0)
      .def("to_array", &to_array)
      .def_property_readonly("ranks", &TTTensor::ranks)
      .def_property_readonly("shape", &TTTensor::mode_sizes)
      .def("norm", [](const TTTensor& t) { return tt_norm(t); })
      .def("round", [](const TTTensor& t, double tol) { return tt_round(t, {tol}); }, py::arg("tol"))
      .def("dot", [](const TTTensor& a, const TTTensor& b) { return tt_dot(a, b); })
      .def("__add__", [](const TTTensor& a, const TTTensor& b) { return tt_axpy(1.0, a, 1.0, b); })
      .def("__sub__", [](const TTTensor& a, const TTTensor& b) { return tt_axpy(1.0, a, -1.0, b); })
      .def("__mul__", [](const TTTensor& a, double s) { return tt_scale(a, s); })
      .def("save", [](const TTTensor& t, const std::string& path) { save_tt(path, t); })
      .def_static("load", [](const std::string& path) { return load_tt_tensor(path); });

  m.def(
      "nll",
      [](const std::vector<std::vector<double>>& points, const std::string& params, const TTTensor& y,
         const std::string& options, bool with_gradient) {
        const TrainOptions o = train_from(options);
        const KroneckerSumKernel k(grid_from(points));
        const HyperParams th = params_from(params);
        const ProbeSet probes = ProbeSet::draw(k.grid().sizes(), o.probes, o.seed);
        const NllEvaluation e = nll_evaluate(k, th, y, probes, o, with_gradient);
        return py::make_tuple(e.value, e.gradient);
      },
      py::arg("points"), py::arg("params"), py::arg("y"), py::arg("options"), py::arg("with_gradient") = true);

  m.def(
      "fit",
      [](const std::vector<std::vector<double>>& points, const std::string& params, const TTTensor& y,
         const std::string& options) {
        const FitResult r = fit_hyperparameters(KroneckerSumKernel(grid_from(points)), y, params_from(params),
                                                train_from(options));
        return nlohmann::json(r).dump();
      },
      py::arg("points"), py::arg("params"), py::arg("y"), py::arg("options"));

  m.def(
      "predict_mean",
      [](const std::vector<std::vector<double>>& train, const std::vector<std::vector<double>>& test,
         const std::string& params, const TTTensor& y, const std::string& options) {
        return predict_mean(grid_from(train), grid_from(test), params_from(params), y, train_from(options));
      },
      py::arg("train"), py::arg("test"), py::arg("params"), py::arg("y"), py::arg("options"));

  m.def(
      "sample_prior",
      [](const std::vector<std::vector<double>>& points, const std::string& params, double sigma,
         std::uint64_t seed) { return sample_prior(grid_from(points), params_from(params), sigma, seed); },
      py::arg("points"), py::arg("params"), py::arg("sigma"), py::arg("seed"));

  m.def(
      "logdet_quadform",
      [](const std::vector<std::vector<double>>& points, const std::string& params, const TTTensor& z,
         double kryltol, int maxit) {
        KrylovOptions o;
        o.kryltol = kryltol;
        o.maxit = maxit;
        const TTMatrix a = KroneckerSumKernel(grid_from(points)).noisy_kernel(params_from(params));
        return tt_krylov_quadform(MatrixFunctionKind::log, a, z, o).value;
      },
      py::arg("points"), py::arg("params"), py::arg("z"), py::arg("kryltol") = 1e-6, py::arg("maxit") = 50);

  m.def(
      "solve",
      [](const std::vector<std::vector<double>>& points, const std::string& params, const TTTensor& b, double tol) {
        AmenOptions o;
        o.tol = tol;
        const TTMatrix a = KroneckerSumKernel(grid_from(points)).noisy_kernel(params_from(params));
        const AmenResult r = amen_solve(a, b, o);
        return py::make_tuple(r.x, r.residual, r.converged);
      },
      py::arg("points"), py::arg("params"), py::arg("b"), py::arg("tol") = 1e-6);

  m.def(
      "run_experiment",
      [](const std::string& config) {
        const ExperimentConfig c = nlohmann::json::parse(config).get<ExperimentConfig>();
        c.validate();
        const ExperimentReport r = run_experiment(c);
        if (!c.out.empty()) write_report(r, c.out);
        return nlohmann::json(r).dump();
      },
      py::arg("config"));
}
