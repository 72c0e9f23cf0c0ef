#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellconc/bell.hpp"
#include "bellconc/entanglement.hpp"
#include "bellconc/errors.hpp"
#include "bellconc/expdata.hpp"
#include "bellconc/fits.hpp"
#include "bellconc/io.hpp"
#include "bellconc/nlfrac.hpp"
#include "bellconc/qstate.hpp"

namespace py = pybind11;
using namespace bellconc;

namespace {

InequalitySet builtin_set(const std::string& name) {
  if (name == "chsh") return expand_relabelings(std::vector<BellInequality>{chsh_inequality()}, "chsh", true);
  if (name == "svetlichny") return expand_relabelings(std::vector<BellInequality>{svetlichny_inequality()}, "svetlichny");
  if (name == "mermin") return expand_relabelings(std::vector<BellInequality>{mermin_inequality()}, "mermin");
  throw ParameterError("unknown built-in inequality '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonlocal fraction and entanglement of two- and three-qubit states";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NotXStateError>(m, "NotXStateError", domain.ptr());
  py::register_exception<FitError>(m, "FitError", domain.ptr());

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<const CMatrix&>(), py::arg("entries"))
      .def_property_readonly("n_qubits", &DensityMatrix::n_qubits)
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def("to_json", [](const DensityMatrix& r) { return density_matrix_to_json(r); })
      .def_static("from_json", [](const std::string& s) { return density_matrix_from_json(s); });

  py::class_<PureState>(m, "PureState")
      .def(py::init<CVector>(), py::arg("amplitudes"))
      .def_property_readonly("n_qubits", &PureState::n_qubits)
      .def_property_readonly("amplitudes", &PureState::amplitudes)
      .def("density_matrix", [](const PureState& p) { return DensityMatrix::from_pure(p); });

  m.def("gghz", &gghz, py::arg("theta"), py::arg("n_qubits"));
  m.def("werner_like", &werner_like, py::arg("theta"), py::arg("v"), py::arg("n_qubits"));
  m.def("gsms2", &gsms2, py::arg("x"), py::arg("y"));
  m.def("gsms3", &gsms3, py::arg("x"), py::arg("y"));
  m.def("mems", &mems, py::arg("gamma"));
  m.def("phn", &phn, py::arg("x"), py::arg("n_qubits"));
  m.def("basis_state", &basis_state, py::arg("bits"));
  m.def("purity", &purity);
  m.def("fidelity_pure", &fidelity_pure);
  m.def("partial_trace", [](const DensityMatrix& r, const std::vector<int>& keep) { return partial_trace(r, keep); });

  m.def("concurrence2", &concurrence2);
  m.def("gme_concurrence_pure", &gme_concurrence_pure);
  m.def("gme_concurrence_xstate", [](const DensityMatrix& r) { return gme_concurrence_xstate(xstate_decompose(r)); });
  m.def("conc_closed_w2", &conc_closed_w2, py::arg("theta"), py::arg("v"));
  m.def("gme_closed_w3_xstate", &gme_closed_w3_xstate, py::arg("theta"), py::arg("v"));
  m.def("gme_closed_w3_published", &gme_closed_w3_published, py::arg("theta"), py::arg("v"));

  py::class_<InequalitySet>(m, "InequalitySet")
      .def_readonly("n_parties", &InequalitySet::n_parties)
      .def_readonly("tag", &InequalitySet::tag)
      .def_readonly("complete", &InequalitySet::complete)
      .def("__len__", [](const InequalitySet& s) { return s.members.size(); });
  m.def("load_inequality_set", &load_inequality_set, py::arg("directory"), py::arg("n_parties"));
  m.def("builtin_set", &builtin_set, py::arg("name"), "Relabeling orbit of chsh, svetlichny or mermin.");
  m.def("default_inequality_dir", &default_inequality_dir);

  py::class_<PvEstimate>(m, "PvEstimate")
      .def_readonly("p_v", &PvEstimate::p_v)
      .def_readonly("std_err", &PvEstimate::std_err)
      .def_readonly("samples", &PvEstimate::samples)
      .def_readonly("violations", &PvEstimate::violations)
      .def_readonly("set_tag", &PvEstimate::set_tag)
      .def_readonly("lower_bound", &PvEstimate::lower_bound)
      .def("__repr__", [](const PvEstimate& e) {
        return "PvEstimate(p_v=" + format_shortest(e.p_v) + ", std_err=" + format_shortest(e.std_err) + ")";
      });

  m.def("estimate_pv", &estimate_pv, py::arg("rho"), py::arg("set"), py::arg("m"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def(
      "violation_distribution",
      [](const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m, std::uint64_t seed, unsigned workers) {
        return violation_distribution(rho, set, m, seed, workers).values;
      },
      py::arg("rho"), py::arg("set"), py::arg("m"), py::arg("seed") = 1, py::arg("workers") = 1);
  m.def("pv_from_distribution", [](const std::vector<double>& v, double vis) { return pv_from_distribution(v, vis); },
        py::arg("values"), py::arg("v"));
  m.def("pv_werner2_closed", &pv_werner2_closed);
  m.def("pv_werner2_quadrature", &pv_werner2_quadrature);
  m.def("sample_chsh_reduced", &sample_chsh_reduced, py::arg("v"), py::arg("m"), py::arg("seed") = 1);

  m.def("v_from_pv_2q", &v_from_pv_2q, py::arg("theta"), py::arg("pv_percent"));
  m.def("v_from_pv_3q", &v_from_pv_3q, py::arg("theta"), py::arg("pv_percent"));
  m.def("evaluate_named_fit", &evaluate_named_fit, py::arg("name"), py::arg("pv_percent"), py::arg("theta") = 0.0);
  m.def("named_fits", &named_fits);

  py::class_<PvCCResult>(m, "PvCCResult")
      .def_readonly("estimate", &PvCCResult::estimate)
      .def_readonly("low", &PvCCResult::low)
      .def_readonly("high", &PvCCResult::high)
      .def_readonly("blocks", &PvCCResult::blocks);
  py::class_<CCDataset>(m, "CCDataset")
      .def_readonly("tag", &CCDataset::tag)
      .def("__len__", [](const CCDataset& d) { return d.records.size(); })
      .def("to_csv", [](const CCDataset& d) { return cc_to_csv(d); })
      .def_static("from_csv", [](const std::string& s) { return cc_from_csv(s); });
  m.def(
      "synthesize_cc",
      [](const DensityMatrix& rho, std::size_t blocks, std::uint64_t seed, double counts, std::optional<std::uint64_t> ps) {
        return synthesize_cc(rho, blocks, seed, counts, ps);
      },
      py::arg("rho"), py::arg("blocks"), py::arg("seed") = 1, py::arg("counts_per_setting") = 4000.0,
      py::arg("poisson_seed") = py::none());
  m.def("pv_cc", &pv_cc, py::arg("data"), py::arg("set"), py::arg("margin") = 0.015);
}
