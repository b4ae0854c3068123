#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mqdecay/combinatorics.hpp"
#include "mqdecay/couplings.hpp"
#include "mqdecay/errors.hpp"
#include "mqdecay/fitting.hpp"
#include "mqdecay/model.hpp"
#include "mqdecay/oracle.hpp"
#include "mqdecay/rates.hpp"
#include "mqdecay/series.hpp"

namespace py = pybind11;
using namespace mqdecay;

namespace {

// Exact counts cross the boundary as Python ints via their decimal text.
py::object to_python_int(const BigInt& value) {
  return py::reinterpret_steal<py::object>(
      PyLong_FromString(value.str().c_str(), nullptr, 10));
}

ModelParams params_of(double n, double p, double M2) {
  return ModelParams::from_second_moment(n, p, M2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of mqdecay";

  static py::exception<Error> base(m, "MqdecayError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("coherence_count", [](int n, int M) { return to_python_int(coherence_count(n, M)); },
        py::arg("n"), py::arg("M"));
  m.def("config_count",
        [](int n, int M, int f) { return to_python_int(config_count(n, M, f)); }, py::arg("n"),
        py::arg("M"), py::arg("f"));

  py::class_<CouplingSet>(m, "CouplingSet")
      .def_static("from_upper_triangle",
                  [](std::size_t n, const std::vector<double>& upper) {
                    return CouplingSet::from_upper_triangle(n, upper);
                  },
                  py::arg("n"), py::arg("upper_triangle"))
      .def_property_readonly("n", &CouplingSet::size)
      .def("upper_triangle", &CouplingSet::upper_triangle)
      .def("__call__", [](const CouplingSet& c, std::size_t j, std::size_t k) { return c(j, k); });

  m.def("synth_constant", &synth_constant, py::arg("n"), py::arg("b"));
  m.def("synth_random", &synth_random, py::arg("n"), py::arg("magnitude"),
        py::arg("zero_mean") = true, py::arg("seed") = 0);
  m.def("degree_of_correlation", [](const CouplingSet& c) { return degree_of_correlation(c).p; });
  m.def("second_moment", [](const CouplingSet& c) { return second_moment(c).M2; });

  py::class_<DecaySeries>(m, "DecaySeries")
      .def_readonly("times", &DecaySeries::times)
      .def_readonly("values", &DecaySeries::values)
      .def_readonly("label", &DecaySeries::label)
      .def("__len__", &DecaySeries::size);

  m.def("uniform_time_grid", &uniform_time_grid, py::arg("t_max"), py::arg("steps"));
  m.def("exact_signal_dipolar",
        [](const CouplingSet& c, int M, const std::vector<double>& times, std::size_t workers) {
          py::gil_scoped_release release;
          return exact_signal_dipolar(c, M, times, {14, workers});
        },
        py::arg("couplings"), py::arg("M"), py::arg("times"), py::arg("workers") = 0);
  m.def("exact_signal_total",
        [](const CouplingSet& c, const std::vector<double>& times, std::size_t workers) {
          py::gil_scoped_release release;
          return exact_signal_total(c, times, {14, workers});
        },
        py::arg("couplings"), py::arg("times"), py::arg("workers") = 0);

  m.def("s_m_composite",
        [](double n, double p, double M2, double M, double t) {
          return s_m_composite(params_of(n, p, M2), M, t);
        },
        py::arg("n"), py::arg("p"), py::arg("M2"), py::arg("M"), py::arg("t"));
  m.def("s_total",
        [](double n, double p, double M2, double t) { return s_total(params_of(n, p, M2), t); },
        py::arg("n"), py::arg("p"), py::arg("M2"), py::arg("t"));
  m.def("gate_error",
        [](double n, double p, double M2, double t) { return gate_error(params_of(n, p, M2), t); },
        py::arg("n"), py::arg("p"), py::arg("M2"), py::arg("t"));

  py::class_<RateResult>(m, "RateResult")
      .def_property_readonly("status",
                             [](const RateResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("rate", &RateResult::rate)
      .def_readonly("crossing_time", &RateResult::crossing_time)
      .def("ok", &RateResult::ok);

  m.def("composite_rate",
        [](double n, double p, double M2, double M) {
          return composite_rate(params_of(n, p, M2), M);
        },
        py::arg("n"), py::arg("p"), py::arg("M2"), py::arg("M"));
  m.def("total_rate",
        [](double n, double p, double M2) { return total_rate(params_of(n, p, M2)); },
        py::arg("n"), py::arg("p"), py::arg("M2"));
  m.def("scaling_exponent",
        [](const std::vector<double>& n_values, double p, double M2, std::optional<int> M) {
          std::vector<ModelParams> list;
          for (double n : n_values) list.push_back(params_of(n, p, M2));
          return scaling_exponent(list, M).exponent;
        },
        py::arg("n_values"), py::arg("p"), py::arg("M2"), py::arg("M") = py::none());

  py::class_<RatePoint>(m, "RatePoint")
      .def(py::init([](int n, int M, double rate, double sigma) {
             return RatePoint{n, M, rate, sigma};
           }),
           py::arg("n"), py::arg("M"), py::arg("rate"), py::arg("sigma"))
      .def_readwrite("n", &RatePoint::n)
      .def_readwrite("M", &RatePoint::M)
      .def_readwrite("rate", &RatePoint::rate)
      .def_readwrite("sigma", &RatePoint::sigma);

  py::class_<FitResult>(m, "FitResult")
      .def(py::init([](int n, double p, double M2) {
             FitResult fit;
             fit.n = n;
             fit.p = p;
             fit.M2 = M2;
             fit.converged = true;
             return fit;
           }),
           py::arg("n"), py::arg("p"), py::arg("M2"))
      .def_readonly("n", &FitResult::n)
      .def_readonly("p", &FitResult::p)
      .def_readonly("M2", &FitResult::M2)
      .def_readonly("chi2", &FitResult::chi2)
      .def_readonly("n_points", &FitResult::n_points)
      .def_readonly("converged", &FitResult::converged);

  m.def("fit_rates",
        [](const std::vector<RatePoint>& points, std::size_t workers) {
          FitOptions options;
          options.workers = workers;
          py::gil_scoped_release release;
          return fit_rates(points, options);
        },
        py::arg("points"), py::arg("workers") = 0);
  m.def("pool_second_moment",
        [](const std::vector<FitResult>& fits) {
          const PooledMoment pooled = pool_second_moment(fits);
          return py::make_tuple(pooled.mean, pooled.sd);
        },
        py::arg("fits"));
}
