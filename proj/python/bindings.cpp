#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "entlaser/app.hpp"
#include "entlaser/errors.hpp"

namespace py = pybind11;
using namespace entlaser;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict d;
  d["t"] = to_array(tr.times);
  d["variance_sum"] = to_array(tr.variance_sum);
  d["photon_number"] = to_array(tr.photon_number);
  py::array_t<bool> flags(tr.entangled.size());
  auto f = flags.mutable_unchecked<1>();
  for (std::size_t i = 0; i < tr.entangled.size(); ++i) f(i) = tr.entangled[i];
  d["entangled"] = flags;
  return d;
}

py::dict report_dict(const EntanglementReport& r) {
  py::dict d;
  d["windows"] = r.windows;
  d["max_entangled_photons"] = r.max_entangled_photons;
  d["v_min"] = r.v_min;
  d["t_v_min"] = r.t_v_min;
  return d;
}

py::dict info_dict(const SimulationInfo& info) {
  py::dict d;
  d["requested"] = std::string(to_string(info.requested));
  d["used"] = std::string(to_string(info.used));
  d["regime"] = std::string(to_string(info.regime));
  d["fallback_notice"] = info.fallback_notice;
  d["min_occupation"] = info.min_occupation;
  d["negativity_flag"] = info.negativity_flag;
  return d;
}

py::dict run_dict(const RunOutcome& out) {
  py::dict d = trajectory_dict(out.result.trajectory);
  d["report"] = report_dict(out.report);
  d["info"] = info_dict(out.result.info);
  return d;
}

}  // namespace

PYBIND11_MODULE(_entlaser, m) {
  m.doc() = "Two-mode single-atom laser: coefficients, moment dynamics, entanglement, Fock oracles";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<DegenerateDenominator>(m, "DegenerateDenominator", base.ptr());
  py::register_exception<SpectralDegenerate>(m, "SpectralDegenerate", base.ptr());
  py::register_exception<RegimeMismatch>(m, "RegimeMismatch", base.ptr());
  py::register_exception<TruncationTooSmall>(m, "TruncationTooSmall", base.ptr());
  py::register_exception<DegenerateSteadyState>(m, "DegenerateSteadyState", base.ptr());

  auto params = py::class_<PhysicalParams>(m, "PhysicalParams");
  params.def(py::init<>())
      .def(py::init([](py::kwargs kw) {
        PhysicalParams p;
        for (auto item : kw) param_ref(p, item.first.cast<std::string>()) = item.second.cast<double>();
        return p;
      }))
      .def("validate", [](const PhysicalParams& p) { validate(p); })
      .def("mirrored", &mirrored)
      .def("as_dict",
           [](const PhysicalParams& p) {
             py::dict d;
             for (auto name : kParamNames) d[py::str(std::string(name))] = param_value(p, name);
             return d;
           })
      .def(py::self == py::self)
      .def("__repr__", [](const PhysicalParams& p) {
        std::ostringstream os;
        os << "PhysicalParams(";
        for (std::size_t i = 0; i < kParamNames.size(); ++i) {
          os << (i ? ", " : "") << kParamNames[i] << '=' << param_value(p, kParamNames[i]);
        }
        os << ')';
        return os.str();
      });
  for (auto name : kParamNames) {
    const std::string key(name);
    params.def_property(
        key.c_str(), [key](const PhysicalParams& p) { return param_value(p, key); },
        [key](PhysicalParams& p, double v) { param_ref(p, key) = v; });
  }

  py::class_<CoefficientSet>(m, "CoefficientSet")
      .def_readonly("alpha11", &CoefficientSet::alpha11)
      .def_readonly("alpha12", &CoefficientSet::alpha12)
      .def_readonly("alpha21", &CoefficientSet::alpha21)
      .def_readonly("alpha22", &CoefficientSet::alpha22)
      .def_readonly("beta11", &CoefficientSet::beta11)
      .def_readonly("beta12", &CoefficientSet::beta12)
      .def_readonly("beta21", &CoefficientSet::beta21)
      .def_readonly("beta22", &CoefficientSet::beta22)
      .def_readonly("c11", &CoefficientSet::c11)
      .def_readonly("c12", &CoefficientSet::c12)
      .def_readonly("c21", &CoefficientSet::c21)
      .def_readonly("c22", &CoefficientSet::c22)
      .def_readonly("d11", &CoefficientSet::d11)
      .def_readonly("d22", &CoefficientSet::d22)
      .def_readonly("d12", &CoefficientSet::d12)
      .def_readonly("kappa1", &CoefficientSet::kappa1)
      .def_readonly("kappa2", &CoefficientSet::kappa2);

  py::class_<PParams>(m, "PParams")
      .def_readonly("p1", &PParams::p1)
      .def_readonly("p2", &PParams::p2)
      .def_readonly("p3", &PParams::p3)
      .def_readonly("p4", &PParams::p4)
      .def_readonly("p5", &PParams::p5);

  py::class_<MomentState>(m, "MomentState")
      .def(py::init<>())
      .def_readwrite("b1", &MomentState::b1)
      .def_readwrite("b2", &MomentState::b2)
      .def_readwrite("n1", &MomentState::n1)
      .def_readwrite("n2", &MomentState::n2)
      .def_readwrite("m", &MomentState::m);

  m.def("compute_p_params", &compute_p_params, py::arg("params"));
  m.def("compute_coefficients", &compute_coefficients, py::arg("params"),
        py::arg("floor") = kDefaultDenominatorFloor);
  m.def(
      "parametric_limits",
      [](const PhysicalParams& p) {
        const ParametricLimits lim = parametric_limits(p);
        return std::pair(lim.alpha, lim.alpha_prime);
      },
      py::arg("params"), "(alpha, alpha_prime); None where undefined");
  m.def(
      "classify_regime",
      [](const PhysicalParams& p, double dominance) {
        return std::string(to_string(classify_regime(p, dominance)));
      },
      py::arg("params"), py::arg("dominance") = kDefaultDominance);

  m.def("vacuum_state", &vacuum_state);
  m.def("coherent_state", &coherent_state, py::arg("beta1"), py::arg("beta2"));
  m.def("two_mode_squeezed_state", &two_mode_squeezed_state, py::arg("r"));
  m.def("variance_sum", &variance_sum, py::arg("state"));
  m.def("photon_number", &photon_number, py::arg("state"));
  m.def("parametric_closed_forms", &parametric_closed_forms, py::arg("alpha"), py::arg("kappa"),
        py::arg("v0"), py::arg("n0"), py::arg("m0_sym"), py::arg("t"));

  m.def(
      "simulate",
      [](const PhysicalParams& p, const MomentState& init, double t_max, std::size_t samples,
         const std::string& method) {
        SimulationResult res = simulate(p, init, t_max, samples, sim_method_from_string(method));
        py::dict d = trajectory_dict(res.trajectory);
        d["report"] = report_dict(entanglement_window(res.trajectory));
        d["info"] = info_dict(res.info);
        return d;
      },
      py::arg("params"), py::arg("init"), py::arg("t_max"), py::arg("samples") = 2000,
      py::arg("method") = "spectral");

  m.def(
      "run_preset",
      [](const std::string& name, const std::filesystem::path& dir, const std::string& method) {
        RunConfig cfg = load_preset(name, dir);
        if (!method.empty()) cfg.sim.method = sim_method_from_string(method);
        return run_dict(execute_run(cfg));
      },
      py::arg("name"), py::arg("preset_dir"), py::arg("method") = "");

  m.def(
      "run_config_text",
      [](const std::string& text) { return run_dict(execute_run(config_from_sections(parse_config_text(text)))); },
      py::arg("text"));

  m.def(
      "preset_params",
      [](const std::string& name, const std::filesystem::path& dir) { return load_preset(name, dir).params; },
      py::arg("name"), py::arg("preset_dir"));

  m.def("default_preset_directory", &default_preset_directory);
  m.def("preset_names", [](const std::filesystem::path& dir) { return preset_names(dir); },
        py::arg("preset_dir"));

  m.def("atomic_steady_state", &atomic_steady_state, py::arg("params"));

  m.def(
      "compare_oracle",
      [](const std::string& text, const std::string& kind, int n_max, double threshold,
         std::size_t samples) {
        const RunConfig cfg = config_from_sections(parse_config_text(text));
        OracleOptions opts;
        opts.kind = oracle_kind_from_string(kind);
        opts.n_max = n_max;
        opts.threshold = threshold;
        opts.samples = samples ? samples : cfg.sim.samples;
        const OracleComparison cmp = compare_oracle(cfg, opts);
        py::dict d;
        py::dict dev;
        for (int k = 0; k < 5; ++k) dev[kMomentNames[k]] = cmp.deviation[k];
        d["deviation"] = dev;
        d["max_deviation"] = cmp.max_deviation;
        d["passed"] = cmp.passed();
        d["leakage_exceeded"] = cmp.leakage_exceeded;
        d["last_valid_time"] = cmp.last_valid_time;
        d["t"] = cmp.times;
        d["leakage"] = cmp.leakage;
        d["trace_drift"] = cmp.trace_drift;
        return d;
      },
      py::arg("config_text"), py::arg("kind") = "field", py::arg("n_max") = 24,
      py::arg("threshold") = 1e-3, py::arg("samples") = 0);

  m.attr("SEPARABLE_BOUND") = kSeparableBound;
}
