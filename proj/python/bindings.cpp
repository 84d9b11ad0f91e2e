#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfotto/analytic4.hpp"
#include "mfotto/correlations.hpp"
#include "mfotto/errors.hpp"
#include "mfotto/otto.hpp"
#include "mfotto/response.hpp"
#include "mfotto/semiclassical.hpp"
#include "mfotto/validation.hpp"

namespace py = pybind11;
using namespace mfotto;

namespace {

ChainParams make_params(int n, double j1, double j2, double b, double e_field) {
  ChainParams p{n, j1, j2, b, e_field};
  p.validate();
  return p;
}

DensityMatrix thermal_state(const ChainParams& p, double t) { return density_matrix(gibbs(solve(p), t)); }

py::dict cycle_dict(const CycleResult& r) {
  py::dict d;
  d["q_in"] = r.q_in;
  d["q_out"] = r.q_out;
  d["work"] = r.work;
  d["efficiency"] = r.efficiency;
  d["carnot"] = r.carnot;
  d["engine"] = r.is_engine();
  return d;
}

CycleSpec cycle_spec(const ChainParams& p, double t_hot, double t_cold, double p_high, double p_low,
                     const std::string& mode) {
  CycleSpec s;
  s.params = p;
  s.t_hot = t_hot;
  s.t_cold = t_cold;
  s.p_high = p_high;
  s.p_low = p_low;
  if (mode == "thermo") {
    s.mode = CycleMode::ThermodynamicAdiabatic;
  } else if (mode == "quantum") {
    s.mode = CycleMode::QuantumAdiabatic;
  } else {
    throw ParameterError("mode must be 'thermo' or 'quantum'");
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact diagonalization of a frustrated spin ring in electric and magnetic fields";

  // translators run last-registered first, so bases go before derived types
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  const auto& numeric = py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<NoThresholdError>(m, "NoThresholdError", numeric.ptr());
  py::register_exception<ContinuationError>(m, "ContinuationError", numeric.ptr());

  py::class_<ChainParams>(m, "ChainParams")
      .def(py::init(&make_params), py::arg("n") = 4, py::arg("j1") = 1.0, py::arg("j2") = -1.0, py::arg("b") = 0.0,
           py::arg("e_field") = 0.0)
      .def_readwrite("n", &ChainParams::n)
      .def_readwrite("j1", &ChainParams::j1)
      .def_readwrite("j2", &ChainParams::j2)
      .def_readwrite("b", &ChainParams::b)
      .def_readwrite("e_field", &ChainParams::e_field)
      .def("__repr__", [](const ChainParams& p) {
        return "ChainParams(n=" + std::to_string(p.n) + ", j1=" + std::to_string(p.j1) + ", j2=" +
               std::to_string(p.j2) + ", b=" + std::to_string(p.b) + ", e_field=" + std::to_string(p.e_field) + ")";
      });

  m.def("hamiltonian", [](const ChainParams& p) { return build_hamiltonian(p); });
  m.def("chirality_operator", &build_chirality_operator, py::arg("n"));

  m.def(
      "spectrum",
      [](const ChainParams& p) {
        const SpectrumPtr s = solve(p);
        return py::make_tuple(s->energies, s->states, s->sz_sector);
      },
      "(energies, eigenvectors, sz) in ascending energy order");

  m.def("free_energy", [](const ChainParams& p, double t) { return free_energy(*solve(p), t); });
  m.def("entropy", [](const ChainParams& p, double t) { return entropy(*solve(p), t); });
  m.def("internal_energy", [](const ChainParams& p, double t) { return internal_energy(gibbs(solve(p), t)); });
  m.def("density_matrix", [](const ChainParams& p, double t) { return thermal_state(p, t).entries; });

  m.def("tangles", [](const ChainParams& p, double t) {
    const DensityMatrix rho = thermal_state(p, t);
    py::dict d;
    d["tau1"] = one_tangle(rho);
    d["tau2"] = two_tangle(rho, p.n);
    d["concurrence"] = concurrence_by_distance(rho);
    d["chirality"] = chirality_expectation(rho, build_chirality_operator(p.n));
    return d;
  });
  m.def("threshold_temperature", &threshold_temperature, py::arg("params"), py::arg("t_lo") = 1.0,
        py::arg("t_hi") = 100.0);

  m.def(
      "susceptibility",
      [](const ChainParams& p, const std::string& field, double t) {
        if (field != "magnetic" && field != "electric") throw ParameterError("field must be 'magnetic' or 'electric'");
        return susceptibility(p, field == "magnetic" ? Field::Magnetic : Field::Electric, t);
      },
      py::arg("params"), py::arg("field"), py::arg("t"));
  m.def(
      "fidelity",
      [](const ChainParams& a, const ChainParams& b, double t) {
        return uhlmann_fidelity(thermal_state(a, t), thermal_state(b, t));
      },
      py::arg("a"), py::arg("b"), py::arg("t"));

  m.def(
      "run_cycle",
      [](const ChainParams& p, double t_hot, double t_cold, double p_high, double p_low, const std::string& mode) {
        return cycle_dict(run_cycle(cycle_spec(p, t_hot, t_cold, p_high, p_low, mode)));
      },
      py::arg("params"), py::arg("t_hot") = 30.0, py::arg("t_cold") = 10.0, py::arg("p_high") = 10.0,
      py::arg("p_low") = 3.5, py::arg("mode") = "thermo");
  m.def(
      "efficiency_sweep",
      [](const ChainParams& p, const std::vector<double>& grid, double t_hot, double t_cold, double p_low, int jobs) {
        py::list out;
        for (const SweepRow& r : efficiency_sweep(cycle_spec(p, t_hot, t_cold, p_low, p_low, "thermo"), grid, jobs)) {
          py::dict d;
          d["p"] = r.p;
          d["ratio"] = r.ratio;
          d["thermo"] = cycle_dict(r.thermo);
          d["quantum"] = r.quantum_ok ? py::object(cycle_dict(r.quantum)) : py::object(py::none());
          d["tau2_hot"] = r.tau2_hot;
          d["tau1_hot"] = r.tau1_hot;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("grid"), py::arg("t_hot") = 30.0, py::arg("t_cold") = 10.0, py::arg("p_low") = 3.5,
      py::arg("jobs") = 1);

  m.def(
      "entropy_sc",
      [](double t, double p, double j, double b) {
        const ScValue v = entropy_sc(t, p, ScConfig::make(j, b));
        return py::make_tuple(v.value, v.valid);
      },
      py::arg("t"), py::arg("p"), py::arg("j") = 1.0, py::arg("b") = 1.0);
  m.def(
      "free_energy_sc",
      [](double t, double p, double j, double b) {
        const ScValue v = free_energy_sc(t, p, ScConfig::make(j, b));
        return py::make_tuple(v.value, v.valid);
      },
      py::arg("t"), py::arg("p"), py::arg("j") = 1.0, py::arg("b") = 1.0);
  m.def(
      "efficiency_sc",
      [](double t_l, double t_h, double p, double p1, double j, double b) {
        return efficiency_sc(t_l, t_h, p, p1, ScConfig::make(j, b));
      },
      py::arg("t_l"), py::arg("t_h"), py::arg("p"), py::arg("p1") = 3.5, py::arg("j") = 1.0, py::arg("b") = 1.0);

  m.def("spectrum4", &analytic4::spectrum4, py::arg("j"), py::arg("b"), py::arg("d"));

  m.def(
      "validate",
      [](double perturb) {
        ValidationOptions o;
        o.perturb = perturb;
        const Report r = run_validation(o);
        py::list checks;
        for (const Check& c : r.checks) checks.append(py::make_tuple(c.name, c.max_deviation, c.tolerance, c.passed()));
        return py::make_tuple(r.passed(), checks);
      },
      py::arg("perturb") = 0.0);
}
