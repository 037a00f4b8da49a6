#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfel/classical.hpp"
#include "qfel/design.hpp"
#include "qfel/dynamics.hpp"
#include "qfel/errors.hpp"
#include "qfel/momentum.hpp"
#include "qfel/params.hpp"
#include "qfel/quantum_stats.hpp"
#include "qfel/version.hpp"

namespace py = pybind11;
using namespace qfel;

PYBIND11_MODULE(qfelo, m) {
  m.doc() =
      "Quantum FEL oscillator: steady-state photon statistics, "
      "master-equation dynamics, classical comparison, and design chain";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<QuantumOscParams>(m, "QuantumOscParams")
      .def_static("from_theta_Na_wrT", &QuantumOscParams::from_theta_Na_wrT,
                  py::arg("theta"), py::arg("Na"), py::arg("wrT"))
      .def_static("from_theta_Na_alpha", &QuantumOscParams::from_theta_Na_alpha,
                  py::arg("theta"), py::arg("Na"), py::arg("alpha_at_Na"))
      .def_readonly("theta", &QuantumOscParams::pump_theta)
      .def_readonly("Na", &QuantumOscParams::loss_inverse_Na)
      .def_readonly("wrT", &QuantumOscParams::recoil_wrT)
      .def_readonly("gT", &QuantumOscParams::coupling_gT)
      .def("quantum_alpha_at", &QuantumOscParams::quantum_alpha_at, py::arg("n"))
      .def("quantum_regime", &QuantumOscParams::quantum_regime)
      .def("small_signal", &QuantumOscParams::small_signal);

  m.def("gT_for_threshold_deviation", &gT_for_threshold_deviation,
        py::arg("delta"), py::arg("Na"),
        "coupling gT with losses equal to (1 - delta) times the n = 1 gain");

  py::class_<MomentumDistribution>(m, "MomentumDistribution")
      .def_static("delta", &MomentumDistribution::delta, py::arg("center"))
      .def_static("gaussian", &MomentumDistribution::gaussian,
                  py::arg("center"), py::arg("width"))
      .def_readonly("center_p_over_q", &MomentumDistribution::center_p_over_q)
      .def_readonly("width_dp_over_q", &MomentumDistribution::width_dp_over_q)
      .def_property_readonly("is_delta", [](const MomentumDistribution& d) {
        return d.kind == MomentumDistribution::Kind::Delta;
      });

  py::class_<PhotonStatistics>(m, "PhotonStatistics")
      .def_readonly("probabilities", &PhotonStatistics::probabilities)
      .def_readonly("log_weights", &PhotonStatistics::log_weights)
      .def_readonly("n_max", &PhotonStatistics::n_max)
      .def_readonly("mean", &PhotonStatistics::mean)
      .def_readonly("variance", &PhotonStatistics::variance)
      .def_readonly("fano", &PhotonStatistics::fano)
      .def_readonly("tail_mass_bound", &PhotonStatistics::tail_mass_bound)
      .def_readonly("fano_by_convention", &PhotonStatistics::fano_by_convention);

  m.def("sinc", &sinc, py::arg("x"));
  m.def("rabi_frequency_T", &rabi_frequency_T, py::arg("n"),
        py::arg("p_over_q"), py::arg("params"));
  m.def("gain_ratio", &gain_ratio, py::arg("n"), py::arg("dist"),
        py::arg("params"), py::arg("rel_tol") = 1e-10);
  m.def("fano_small_signal", &fano_small_signal, py::arg("delta"));
  m.def(
      "photon_statistics",
      [](const MomentumDistribution& dist, const QuantumOscParams& params,
         double rel_tol, long start_extra, long hard_cap) {
        return photon_statistics(dist, params, rel_tol,
                                 NmaxPolicy{start_extra, hard_cap});
      },
      py::arg("dist"), py::arg("params"), py::arg("rel_tol") = 1e-10,
      py::arg("start_extra") = 64, py::arg("hard_cap") = 10'000'000,
      "product-form steady-state photon statistics");

  py::enum_<PumpModel>(m, "PumpModel")
      .value("PoissonEnsemble", PumpModel::PoissonEnsemble)
      .value("SequentialKicks", PumpModel::SequentialKicks);

  m.def(
      "run_to_steady_state",
      [](const MomentumDistribution& dist, const QuantumOscParams& params,
         double tol, long long max_kicks, PumpModel pump, double rel_tol) {
        return run_to_steady_state(dist, params, tol, max_kicks, pump, nullptr,
                                   rel_tol);
      },
      py::arg("dist"), py::arg("params"), py::arg("tol") = 1e-9,
      py::arg("max_kicks") = 50'000'000,
      py::arg("pump") = PumpModel::PoissonEnsemble, py::arg("rel_tol") = 1e-10,
      "master-equation relaxation from vacuum to the steady state");

  m.def("madey_gain", &madey_gain, py::arg("linear_gain_quantum"),
        py::arg("recoil_wrT"));
  m.def("classical_fano", &classical_fano, py::arg("recoil_wrT"),
        py::arg("delta_cl"));
  m.def("classical_gaussian", &classical_gaussian, py::arg("mean"),
        py::arg("recoil_wrT"), py::arg("delta_cl"));

  py::class_<GridAxis>(m, "GridAxis")
      .def(py::init([](double lo, double hi, int count, bool log_spaced) {
             return GridAxis{lo, hi, count, log_spaced};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("count"),
           py::arg("log") = false)
      .def_readonly("lo", &GridAxis::lo)
      .def_readonly("hi", &GridAxis::hi)
      .def_readonly("count", &GridAxis::count)
      .def("value", &GridAxis::value, py::arg("i"));

  py::enum_<SweepScenario>(m, "SweepScenario")
      .value("ThetaVsMomentum", SweepScenario::ThetaVsMomentum)
      .value("ThetaVsWidth", SweepScenario::ThetaVsWidth);

  py::class_<SweepCell>(m, "SweepCell")
      .def_readonly("axis1", &SweepCell::axis1)
      .def_readonly("axis2", &SweepCell::axis2)
      .def_readonly("mean_over_Na", &SweepCell::mean_over_Na)
      .def_readonly("fano", &SweepCell::fano)
      .def_readonly("status", &SweepCell::status);

  py::class_<SweepGrid>(m, "SweepGrid")
      .def_readonly("axis1", &SweepGrid::axis1)
      .def_readonly("axis2", &SweepGrid::axis2)
      .def_readonly("cells", &SweepGrid::cells);

  m.def("sweep", &sweep, py::arg("theta_axis"), py::arg("axis2"),
        py::arg("scenario"), py::arg("base"), py::arg("base_dist"),
        py::arg("rel_tol") = 1e-10, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<DesignInputs>(m, "DesignInputs")
      .def(py::init<>())
      .def_readwrite("lambda_L", &DesignInputs::lambda_L)
      .def_readwrite("lambda_W", &DesignInputs::lambda_W)
      .def_readwrite("gain_G1", &DesignInputs::gain_G1)
      .def_readwrite("recoil_wrT", &DesignInputs::recoil_wrT)
      .def_readwrite("kpL_target", &DesignInputs::kpL_target)
      .def_readwrite("RspL_target", &DesignInputs::RspL_target)
      .def_readwrite("delta", &DesignInputs::delta)
      .def_readwrite("f_rep", &DesignInputs::f_rep)
      .def_readwrite("tau_e", &DesignInputs::tau_e)
      .def_readwrite("phi", &DesignInputs::phi)
      .def_readwrite("vartheta", &DesignInputs::vartheta)
      .def("validate", &DesignInputs::validate);

  py::class_<ConstraintVerdict>(m, "ConstraintVerdict")
      .def_readonly("name", &ConstraintVerdict::name)
      .def_readonly("lhs", &ConstraintVerdict::lhs)
      .def_readonly("rhs", &ConstraintVerdict::rhs)
      .def_readonly("relation", &ConstraintVerdict::relation)
      .def_readonly("pass_", &ConstraintVerdict::pass)
      .def_readonly("margin", &ConstraintVerdict::margin);

  py::class_<DesignReport>(m, "DesignReport")
      .def_readonly("gamma0", &DesignReport::gamma0)
      .def_readonly("L", &DesignReport::L)
      .def_readonly("a0", &DesignReport::a0)
      .def_readonly("n_e", &DesignReport::n_e)
      .def_readonly("Gamma", &DesignReport::Gamma)
      .def_readonly("kpL", &DesignReport::kpL)
      .def_readonly("RspL", &DesignReport::RspL)
      .def_readonly("g_sqrtN", &DesignReport::g_sqrtN)
      .def_readonly("eps_n", &DesignReport::eps_n)
      .def_readonly("sigma_e", &DesignReport::sigma_e)
      .def_readonly("beta_star", &DesignReport::beta_star)
      .def_readonly("z_R", &DesignReport::z_R)
      .def_readonly("w0", &DesignReport::w0)
      .def_readonly("tau0", &DesignReport::tau0)
      .def_readonly("I0", &DesignReport::I0)
      .def_readonly("P0", &DesignReport::P0)
      .def_readonly("Ip", &DesignReport::Ip)
      .def_readonly("Qb", &DesignReport::Qb)
      .def_readonly("N_electrons", &DesignReport::N_electrons)
      .def_readonly("L_cav", &DesignReport::L_cav)
      .def_readonly("R_mirror", &DesignReport::R_mirror)
      .def_readonly("n_st", &DesignReport::n_st)
      .def_readonly("n_out", &DesignReport::n_out)
      .def_readonly("verdicts", &DesignReport::verdicts)
      .def_readonly("operating_point_done", &DesignReport::operating_point_done);

  m.def("solve_design_chain", &solve_design_chain, py::arg("inputs"));
  m.def(
      "derive_operating_point",
      [](DesignReport report, const DesignInputs& inputs) {
        derive_operating_point(report, inputs);
        return report;
      },
      py::arg("report"), py::arg("inputs"),
      "returns a copy of the report with the operating point filled in");

  py::class_<FeasibilityGrid>(m, "FeasibilityGrid")
      .def_readonly("sigma_axis", &FeasibilityGrid::sigma_axis)
      .def_readonly("eps_axis", &FeasibilityGrid::eps_axis)
      .def_readonly("masks", &FeasibilityGrid::masks)
      .def_readonly("feasible", &FeasibilityGrid::feasible)
      .def_property_readonly_static("bit_names", [](py::object) {
        std::vector<std::string> names;
        for (int b = 0; b < FeasibilityGrid::kConstraintCount; ++b)
          names.push_back(FeasibilityGrid::kBitNames[b]);
        return names;
      });

  m.def("feasibility_scan", &feasibility_scan, py::arg("report"),
        py::arg("inputs"), py::arg("sigma_axis"), py::arg("eps_axis"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}
