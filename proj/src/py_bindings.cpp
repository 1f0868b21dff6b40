#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magnomech/cli.hpp"
#include "magnomech/config.hpp"
#include "magnomech/covariance.hpp"
#include "magnomech/fockdyn.hpp"
#include "magnomech/spectrum.hpp"
#include "magnomech/validate.hpp"
#include "magnomech/version.hpp"

namespace py = pybind11;
using namespace magnomech;

namespace {

void register_exceptions(py::module_& m) {
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SingularityError>(m, "SingularityError");
    py::register_exception<StabilityError>(m, "StabilityError");
    py::register_exception<TruncationLeakError>(m, "TruncationLeakError");
    py::register_exception<IntegrationError>(m, "IntegrationError");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cavity magnomechanical cooling simulator";
    m.attr("__version__") = kVersion;
    register_exceptions(m);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("omega_a", &SystemParams::omega_a)
        .def_readwrite("omega_m", &SystemParams::omega_m)
        .def_readwrite("omega_b", &SystemParams::omega_b)
        .def_readwrite("omega_d", &SystemParams::omega_d)
        .def_readwrite("kappa_a", &SystemParams::kappa_a)
        .def_readwrite("kappa_m", &SystemParams::kappa_m)
        .def_readwrite("gamma_b", &SystemParams::gamma_b)
        .def_readwrite("g_ma", &SystemParams::g_ma)
        .def_readwrite("g_mb", &SystemParams::g_mb)
        .def_readwrite("eps_d", &SystemParams::eps_d)
        .def_readwrite("n_th", &SystemParams::n_th)
        .def_readwrite("H_bias", &SystemParams::H_bias)
        .def_readwrite("B0", &SystemParams::B0)
        .def_readwrite("volume", &SystemParams::volume)
        .def_property_readonly("delta_a", &SystemParams::delta_a)
        .def_property_readonly("delta_m", &SystemParams::delta_m)
        .def("check", &SystemParams::check);

    py::class_<SteadyAmplitudes>(m, "SteadyAmplitudes")
        .def_readonly("eta", &SteadyAmplitudes::eta)
        .def_readonly("beta", &SteadyAmplitudes::beta)
        .def_readonly("G", &SteadyAmplitudes::G)
        .def_readonly("delta_m_tilde", &SteadyAmplitudes::delta_m_tilde)
        .def_readonly("drive_shift", &SteadyAmplitudes::drive_shift);

    py::class_<EffectiveParams>(m, "EffectiveParams")
        .def(py::init<>())
        .def_readwrite("delta_eff", &EffectiveParams::delta_eff)
        .def_readwrite("kappa_eff", &EffectiveParams::kappa_eff)
        .def_readwrite("G", &EffectiveParams::G)
        .def_readwrite("omega_b", &EffectiveParams::omega_b)
        .def_readwrite("gamma_b", &EffectiveParams::gamma_b)
        .def_readwrite("n_th", &EffectiveParams::n_th);

    py::class_<CoolingResult>(m, "CoolingResult")
        .def_readonly("a_plus", &CoolingResult::a_plus)
        .def_readonly("a_minus", &CoolingResult::a_minus)
        .def_readonly("gamma_md", &CoolingResult::gamma_md)
        .def_readonly("delta_omega_b", &CoolingResult::delta_omega_b)
        .def_readonly("quantum_part", &CoolingResult::quantum_part)
        .def_readonly("classical_part", &CoolingResult::classical_part)
        .def_readonly("n_f", &CoolingResult::n_f)
        .def_readonly("n_f_valid", &CoolingResult::n_f_valid)
        .def_readonly("heating", &CoolingResult::heating);

    m.def("preset", &preset, py::arg("name"));
    m.def("load_config", [](const std::string& text) {
        return load_config(text, nullptr);
    });
    m.def("dump_config", &dump_config);
    m.def("magnon_frequency",
          [](double H) { return magnon_frequency(H, nullptr); }, py::arg("H_tesla"));
    m.def("thermal_occupation", &thermal_occupation, py::arg("T_kelvin"),
          py::arg("omega_b"));
    m.def("temperature_for", &temperature_for, py::arg("n_th"), py::arg("omega_b"));
    m.def("drive_amplitude", &drive_amplitude, py::arg("B0_tesla"),
          py::arg("volume_m3"));
    m.def("steady_state_amplitudes",
          [](const SystemParams& p, bool refine) {
              SteadyStateOptions o;
              o.refine = refine;
              return steady_state_amplitudes(p, o, nullptr);
          },
          py::arg("params"), py::arg("refine") = false);
    m.def("effective_params",
          [](const SystemParams& p, std::complex<double> G) {
              return effective_params(p, G, nullptr);
          },
          py::arg("params"), py::arg("G"));
    m.def("effective_noise_weights", &effective_noise_weights);

    m.def("susceptibility", &susceptibility, py::arg("omega"), py::arg("eff"));
    m.def("cooling_rates", &cooling_rates, py::arg("eff"));
    m.def("detuning_sweep",
          [](const EffectiveParams& e, double from, double to, int n, int jobs) {
              const DetuningSweep s = detuning_sweep(e, from, to, n, jobs);
              py::dict out;
              std::vector<double> delta, gamma, nf;
              std::vector<bool> valid;
              for (const auto& row : s.rows) {
                  delta.push_back(row.delta_eff);
                  gamma.push_back(row.cooling.gamma_md);
                  nf.push_back(row.cooling.n_f);
                  valid.push_back(row.cooling.n_f_valid);
              }
              out["delta_eff"] = delta;
              out["gamma_md"] = gamma;
              out["n_f"] = nf;
              out["n_f_valid"] = valid;
              out["argmax_gamma_md"] = s.argmax_gamma_md;
              out["argmin_n_f"] = s.argmin_n_f;
              return out;
          },
          py::arg("eff"), py::arg("delta_from"), py::arg("delta_to"),
          py::arg("n_points"), py::arg("jobs") = 0);

    py::class_<DriftDiffusion>(m, "DriftDiffusion")
        .def_readonly("A", &DriftDiffusion::A)
        .def_readonly("D", &DriftDiffusion::D)
        .def_readonly("modes", &DriftDiffusion::modes);

    py::class_<CovarianceState>(m, "CovarianceState")
        .def_readonly("V", &CovarianceState::V)
        .def_readonly("t", &CovarianceState::t);

    m.def("build_effective", &build_effective);
    m.def("build_full", &build_full, py::arg("params"), py::arg("G"));
    m.def("thermal_covariance", &thermal_state, py::arg("dd"),
          py::arg("occupations"));
    m.def("steady_state", &steady_state);
    m.def("evolve_covariance",
          [](const DriftDiffusion& dd, const CovarianceState& v0,
             const std::vector<double>& grid) { return evolve(dd, v0, grid); },
          py::arg("dd"), py::arg("v0"), py::arg("t_grid"));
    m.def("occupation", &occupation, py::arg("state"), py::arg("mode"));
    m.def("analytic_nbs",
          [](double G, double k, double g, double w, double nth) {
              return analytic_nbs(G, k, g, w, nth, nullptr);
          },
          py::arg("G"), py::arg("kappa_eff"), py::arg("gamma_b"),
          py::arg("omega_b"), py::arg("n_th"));

    py::class_<StabilityVerdict>(m, "StabilityVerdict")
        .def_readonly("stable", &StabilityVerdict::stable)
        .def_readonly("max_re_eigenvalue", &StabilityVerdict::max_re_eigenvalue)
        .def_readonly("analytic_applicable", &StabilityVerdict::analytic_applicable)
        .def_readonly("analytic_stable", &StabilityVerdict::analytic_stable)
        .def_readonly("threshold_g", &StabilityVerdict::threshold_g);
    m.def("stability", &stability);

    py::class_<FockSpace>(m, "FockSpace")
        .def(py::init<std::vector<std::string>, std::vector<int>>(),
             py::arg("labels"), py::arg("dims"))
        .def_readonly("labels", &FockSpace::labels)
        .def_readonly("dims", &FockSpace::dims)
        .def("dim", &FockSpace::dim);

    m.def("lowering", &lowering);
    m.def("number_operator", &number_operator);
    m.def("product_thermal", &product_thermal);
    m.def("build_hamiltonian_effective", &build_hamiltonian_effective);
    m.def("build_hamiltonian_linear",
          [](const FockSpace& s, const SystemParams& p, std::complex<double> G) {
              return build_hamiltonian_linear(s, p, G);
          });
    m.def("evolve_fock",
          [](const CMatrix& rho0, const FockSpace& space,
             const std::vector<double>& grid, const CMatrix& H,
             const std::vector<std::pair<CMatrix, double>>& diss, double dt) {
              std::vector<Dissipator> ds;
              for (const auto& [op, rate] : diss) ds.push_back({op, rate});
              FockEvolveOptions opts;
              opts.dt = dt;
              const FockTrajectory tr = evolve_density(rho0, space, grid, H, ds, opts);
              py::dict out;
              out["times"] = tr.times;
              out["occupations"] = tr.occupations;
              out["max_trace_drift"] = tr.max_trace_drift;
              out["max_leak"] = tr.max_leak;
              return out;
          },
          py::arg("rho0"), py::arg("space"), py::arg("t_grid"), py::arg("H"),
          py::arg("dissipators"), py::arg("dt") = 0.01);
    m.def("dissipators_effective",
          [](const FockSpace& s, const EffectiveParams& e) {
              std::vector<std::pair<CMatrix, double>> out;
              for (const auto& d : dissipators_effective(s, e))
                  out.emplace_back(d.op, d.rate);
              return out;
          });
    m.def("dissipators_linear",
          [](const FockSpace& s, const SystemParams& p) {
              std::vector<std::pair<CMatrix, double>> out;
              for (const auto& d : dissipators_linear(s, p))
                  out.emplace_back(d.op, d.rate);
              return out;
          });
    m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("space"),
          py::arg("keep"));
    m.def("fidelity", &fidelity, py::arg("rho"), py::arg("sigma"));

    m.def("check_regimes",
          [](const SystemParams& p, const SteadyAmplitudes& amp,
             const EffectiveParams& e) {
              const ValidityReport r = check_regimes(p, amp, e);
              py::list checks;
              for (const auto& c : r.checks) {
                  py::dict d;
                  d["name"] = c.name;
                  d["lhs"] = c.lhs;
                  d["rhs"] = c.rhs;
                  d["ratio"] = c.ratio;
                  d["status"] = to_string(c.status);
                  checks.append(d);
              }
              py::dict out;
              out["checks"] = checks;
              out["overall"] = to_string(r.overall);
              return out;
          });

    m.def("cli_run", &cli::run, py::arg("args"),
          "run the command-line interface in-process");
}
