#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "telegraph/cp_analyzer.hpp"
#include "telegraph/errors.hpp"
#include "telegraph/kraus_channel.hpp"
#include "telegraph/mc_oracle.hpp"
#include "telegraph/memory_kernel.hpp"
#include "telegraph/telegraph_model.hpp"

namespace py = pybind11;
using namespace telegraph;

namespace {

DensityMatrix state(const std::array<double, 3>& bloch) { return bloch_to_density(BlochVector{bloch}); }

std::vector<std::vector<Complex>> to_lists(const ComplexMat2& m) {
  return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Qubit dynamics under random telegraph noise";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NotAState>(m, "NotAState", PyExc_ValueError);
  py::register_exception<NotCompletelyPositive>(m, "NotCompletelyPositive", PyExc_ArithmeticError);
  py::register_exception<UnsupportedKernel>(m, "UnsupportedKernel", PyExc_ValueError);
  py::register_exception<NumericalBlowup>(m, "NumericalBlowup", PyExc_ArithmeticError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::create), py::arg("a"), py::arg("tau"))
      .def_property_readonly("a", &ModelParams::couplings)
      .def_property_readonly("tau", &ModelParams::tau)
      .def("kappa", &ModelParams::kappa, py::arg("i"))
      .def("kappa_tau", &ModelParams::kappa_tau, py::arg("i"))
      .def("mu_squared", &ModelParams::mu_squared, py::arg("i"))
      .def("eigenvalue", &ModelParams::eigenvalue, py::arg("i"))
      .def("__repr__", [](const ModelParams& p) {
        const auto a = p.couplings();
        return "ModelParams(a=(" + std::to_string(a[0]) + ", " + std::to_string(a[1]) + ", " + std::to_string(a[2]) +
               "), tau=" + std::to_string(p.tau()) + ")";
      });

  m.def("response", &response, py::arg("nu"), py::arg("kappa_tau"), "Lambda(nu) for one fluctuation parameter");
  m.def(
      "lambdas", [](const ModelParams& p, double nu) { return propagator(p, nu).lambda; }, py::arg("params"),
      py::arg("nu"), "(1, Lambda_1, Lambda_2, Lambda_3) at nu");
  m.def(
      "propagate",
      [](const std::array<double, 3>& bloch, double nu, const ModelParams& p) {
        return density_to_bloch(propagate(state(bloch), nu, p)).b;
      },
      py::arg("bloch"), py::arg("nu"), py::arg("params"), "Bloch vector at dimensionless time nu");
  m.def("markov_rates", &markov_rates, py::arg("params"));

  m.def(
      "xi", [](double nu, const ModelParams& p) { return xi(nu, p).values; }, py::arg("nu"), py::arg("params"));
  m.def(
      "choi_eigenvalues", [](const ModelParams& p, double nu) { return hermitian_eigenvalues(choi_matrix(p, nu)); },
      py::arg("params"), py::arg("nu"), "ascending Choi spectrum");

  py::class_<CpVerdict>(m, "CpVerdict")
      .def_readonly("is_cp", &CpVerdict::is_cp)
      .def_readonly("horizon", &CpVerdict::horizon)
      .def_readonly("grid_points", &CpVerdict::grid_points)
      .def_property_readonly("witness",
                             [](const CpVerdict& v) -> py::object {
                               if (!v.witness) return py::none();
                               return py::make_tuple(v.witness->nu, v.witness->component, v.witness->value);
                             })
      .def("__bool__", [](const CpVerdict& v) { return v.is_cp; });

  m.def(
      "is_cp", [](const ModelParams& p) { return is_cp(p); }, py::arg("params"));
  m.def(
      "critical_flip_parameter",
      [](const std::array<double, 3>& d, double tau, double tol) { return critical_flip_parameter(d, tau, tol); },
      py::arg("direction"), py::arg("tau") = 1.0, py::arg("tolerance") = 1e-3,
      "critical a*tau along a direction, or None if CP for all a*tau");
  m.def("sufficient_frequency_bound", &sufficient_frequency_bound);
  m.def("sufficient_condition", &sufficient_condition, py::arg("params"));
  m.def("markov_cp_check", &markov_cp_check, py::arg("gamma"));

  m.def(
      "kraus_operators",
      [](const ModelParams& p, double nu) {
        py::list out;
        for (const auto& op : kraus_from_params(p, nu).operators)
          out.append(py::make_tuple(op.pauli_index, op.weight, to_lists(op.matrix)));
        return out;
      },
      py::arg("params"), py::arg("nu"), "list of (pauli_index, xi_j, sqrt(xi_j) * pauli matrix)");
  m.def(
      "apply_kraus",
      [](const ModelParams& p, double nu, const std::array<double, 3>& bloch) {
        return density_to_bloch(apply(kraus_from_params(p, nu), state(bloch))).b;
      },
      py::arg("params"), py::arg("nu"), py::arg("bloch"));

  m.def(
      "ensemble_average",
      [](const ModelParams& p, const std::array<double, 3>& bloch, const std::vector<double>& grid, std::size_t n,
         std::uint64_t seed, unsigned threads) {
        EnsembleResult r;
        {
          py::gil_scoped_release release;
          r = ensemble_average(p, state(bloch), grid, n, seed, Execution{threads});
        }
        py::dict d;
        d["grid"] = r.grid;
        d["mean"] = r.mean;
        d["standard_error"] = r.standard_error;
        d["trajectories"] = r.trajectories;
        d["seed"] = r.seed;
        d["max_purity_drift"] = r.max_purity_drift;
        return d;
      },
      py::arg("params"), py::arg("bloch"), py::arg("grid"), py::arg("trajectories"), py::arg("seed"),
      py::arg("threads") = 0u);

  m.def(
      "solve_volterra",
      [](double tau, double lambda, double t_max, std::size_t steps, bool extrapolate) {
        const auto ev = solve_volterra(KernelFunction::exponential(tau), lambda, t_max, steps,
                                       extrapolate ? VolterraScheme::richardson : VolterraScheme::heun_trapezoid);
        return py::make_tuple(ev.grid, ev.values);
      },
      py::arg("tau"), py::arg("eigenvalue"), py::arg("t_max"), py::arg("steps"), py::arg("extrapolate") = false,
      "exponential-kernel Volterra solution; returns (times, values)");
}
