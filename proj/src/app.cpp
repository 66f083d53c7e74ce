#include "entlaser/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "entlaser/errors.hpp"

namespace entlaser {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunOutcome execute_run(const RunConfig& cfg) {
  RunOutcome out;
  SimulationOptions opts;
  opts.dominance = cfg.sim.dominance;
  out.result = simulate(cfg.params, cfg.initial.state(), cfg.sim.t_max, cfg.sim.samples,
                        cfg.sim.method, opts);
  out.report = entanglement_window(out.result.trajectory);
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& cfg,
                                                          const RunOutcome& run) {
  std::vector<std::pair<std::string, std::string>> md;
  for (auto name : kParamNames) {
    md.emplace_back(std::string(name), format_double(param_value(cfg.params, name)));
  }
  md.emplace_back("initial", std::string(to_string(cfg.initial.kind)));
  const MomentState s = cfg.initial.state();
  if (cfg.initial.kind != InitialKind::Vacuum) {
    md.emplace_back("b1_re", format_double(s.b1.real()));
    md.emplace_back("b1_im", format_double(s.b1.imag()));
    md.emplace_back("b2_re", format_double(s.b2.real()));
    md.emplace_back("b2_im", format_double(s.b2.imag()));
    md.emplace_back("n1", format_double(s.n1));
    md.emplace_back("n2", format_double(s.n2));
    md.emplace_back("m_re", format_double(s.m.real()));
    md.emplace_back("m_im", format_double(s.m.imag()));
  }
  const SimulationInfo& info = run.result.info;
  md.emplace_back("t_max", format_double(cfg.sim.t_max));
  md.emplace_back("samples", std::to_string(cfg.sim.samples));
  md.emplace_back("method", std::string(to_string(info.requested)));
  md.emplace_back("method_used", std::string(to_string(info.used)));
  md.emplace_back("regime", std::string(to_string(info.regime)));
  md.emplace_back("dominance", format_double(cfg.sim.dominance));
  if (info.fallback_notice) md.emplace_back("notice", *info.fallback_notice);
  md.emplace_back("min_occupation", format_double(info.min_occupation));
  md.emplace_back("negativity_flag", info.negativity_flag ? "1" : "0");
  return md;
}

}  // namespace

void write_csv(std::ostream& os, const RunConfig& cfg, const RunOutcome& run) {
  for (const auto& [k, v] : metadata(cfg, run)) os << "# " << k << '=' << v << '\n';
  const Trajectory& tr = run.result.trajectory;
  os << "t,variance_sum,photon_number,entangled\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << format_double(tr.times[i]) << ',' << format_double(tr.variance_sum[i]) << ','
       << format_double(tr.photon_number[i]) << ',' << (tr.entangled[i] ? 1 : 0) << '\n';
  }
}

namespace {

json report_json(const EntanglementReport& r) {
  json windows = json::array();
  for (const auto& [on, off] : r.windows) windows.push_back({on, off});
  return {{"windows", windows},
          {"max_entangled_photons", r.max_entangled_photons},
          {"v_min", r.v_min},
          {"t_v_min", r.t_v_min}};
}

}  // namespace

void write_json(std::ostream& os, const RunConfig& cfg, const RunOutcome& run) {
  json md = json::object();
  for (const auto& [k, v] : metadata(cfg, run)) md[k] = v;
  const Trajectory& tr = run.result.trajectory;
  std::vector<int> ent(tr.entangled.begin(), tr.entangled.end());
  const json doc = {{"metadata", md},
                    {"report", report_json(run.report)},
                    {"trajectory",
                     {{"t", tr.times},
                      {"variance_sum", tr.variance_sum},
                      {"photon_number", tr.photon_number},
                      {"entangled", ent}}}};
  os << doc.dump(1) << '\n';
}

std::string report_summary(const RunOutcome& run) {
  std::ostringstream os;
  const EntanglementReport& r = run.report;
  const SimulationInfo& info = run.result.info;
  os << "method: " << to_string(info.used);
  if (info.used != info.requested) os << " (requested " << to_string(info.requested) << ")";
  os << "\nregime: " << to_string(info.regime) << '\n';
  if (info.fallback_notice) os << "notice: " << *info.fallback_notice << '\n';
  if (r.windows.empty()) {
    os << "entanglement windows: none\n";
  } else {
    os << "entanglement windows:";
    for (const auto& [on, off] : r.windows) os << " [" << on << ", " << off << ']';
    os << '\n';
  }
  os << "max entangled photons: " << r.max_entangled_photons << '\n';
  os << "min variance sum: " << r.v_min << " at t = " << r.t_v_min << '\n';
  if (info.negativity_flag) {
    os << "warning: occupation dipped to " << info.min_occupation << '\n';
  }
  return os.str();
}

void set_sweep_parameter(PhysicalParams& p, std::string_view axis, double value) {
  if (axis == "kappa") {
    p.kappa1 = p.kappa2 = value;
  } else if (axis == "gamma") {
    p.gamma1 = p.gamma2 = p.gamma3 = p.gamma4 = value;
  } else {
    param_ref(p, axis) = value;
  }
}

std::vector<SweepRow> run_sweep(const RunConfig& base, std::string_view axis,
                                std::span<const double> values, unsigned threads) {
  {
    PhysicalParams probe = base.params;
    set_sweep_parameter(probe, axis, 0.0);  // rejects unknown axes up front
  }
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      try {
        RunConfig cfg = base;
        set_sweep_parameter(cfg.params, axis, values[i]);
        const RunOutcome out = execute_run(cfg);
        row.report = out.report;
        row.notice = out.result.info.fallback_notice;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, std::string_view axis, std::span<const SweepRow> rows) {
  os << "# axis=" << axis << '\n';
  os << "value,status,t_on,t_off,windows,v_min,t_v_min,max_entangled_photons,error\n";
  for (const SweepRow& row : rows) {
    os << format_double(row.value) << ',';
    if (!row.report) {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      os << "error,,,,,,," << msg << '\n';
      continue;
    }
    const EntanglementReport& r = *row.report;
    os << "ok,";
    if (r.windows.empty()) {
      os << ",,0,";
    } else {
      os << format_double(r.windows.front().first) << ','
         << format_double(r.windows.front().second) << ',' << r.windows.size() << ',';
    }
    os << format_double(r.v_min) << ',' << format_double(r.t_v_min) << ','
       << format_double(r.max_entangled_photons) << ",\n";
  }
}

std::string_view to_string(OracleKind k) { return k == OracleKind::Micro ? "micro" : "field"; }

OracleKind oracle_kind_from_string(std::string_view name) {
  if (name == "field") return OracleKind::Field;
  if (name == "micro") return OracleKind::Micro;
  throw InvalidParameter("oracle", "expected field or micro");
}

std::array<double, 5> moment_deviation(std::span<const MomentState> oracle,
                                       std::span<const MomentState> theory,
                                       DeviationMetric metric) {
  if (oracle.size() > theory.size()) {
    throw InvalidParameter("oracle", "more oracle samples than theory samples");
  }
  auto pick = [](const MomentState& s, int k) -> cplx {
    switch (k) {
      case 0: return s.b1;
      case 1: return s.b2;
      case 2: return s.n1;
      case 3: return s.n2;
      default: return s.m;
    }
  };
  std::array<double, 5> dev{};
  for (int k = 0; k < 5; ++k) {
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      const double ref = std::abs(pick(theory[i], k));
      const double diff = std::abs(pick(oracle[i], k) - pick(theory[i], k));
      if (metric == DeviationMetric::Pointwise) {
        worst = std::max(worst, diff / std::max(ref, 1e-12));
      } else {
        worst = std::max(worst, diff);
        scale = std::max(scale, ref);
      }
    }
    dev[k] = metric == DeviationMetric::Pointwise ? worst : worst / std::max(scale, 1e-12);
  }
  return dev;
}

OracleComparison compare_oracle(const RunConfig& cfg, const OracleOptions& opts) {
  if (cfg.initial.kind == InitialKind::Moments) {
    throw InvalidParameter("initial.state", "the oracle needs a vacuum or coherent field state");
  }
  if (opts.samples < 2) throw InvalidParameter("samples", "must be >= 2");
  if (!(opts.threshold > 0.0)) throw InvalidParameter("threshold", "must be > 0");

  OracleComparison cmp;
  cmp.kind = opts.kind;
  cmp.n_max = opts.n_max;
  cmp.threshold = opts.threshold;
  cmp.metric = opts.kind == OracleKind::Field ? DeviationMetric::Pointwise
                                              : DeviationMetric::ScaleNormalised;
  cmp.times = uniform_grid(cfg.sim.t_max, opts.samples);

  const MomentState init = cfg.initial.state();
  cmp.theory = evolve_moments(cfg.params, init, cmp.times, SolverMethod::Spectral);

  const FockDensity field = fock_coherent(cfg.initial.beta1, cfg.initial.beta2, opts.n_max);
  FockRun run;
  try {
    if (opts.kind == OracleKind::Field) {
      const CoefficientSet c = compute_coefficients(cfg.params);
      const FieldGenerator gen =
          build_field_generator(c, cfg.params.kappa1, cfg.params.kappa2, opts.n_max);
      run = evolve_fock(gen, field, cmp.times);
    } else {
      const MicroGenerator gen = build_micro_generator(cfg.params, opts.n_max);
      const FockDensity rho0 = atom_field_product(atomic_steady_state(cfg.params), field);
      run = evolve_fock(gen, rho0, cmp.times);
    }
  } catch (const LeakageExceeded& e) {
    run = e.partial();
    cmp.leakage_exceeded = true;
    cmp.last_valid_time = e.last_valid_time();
  }

  const double trace0 = run.samples.empty() ? 1.0 : run.samples.front().trace;
  for (const FockSample& s : run.samples) {
    cmp.oracle.push_back(s.moments);
    cmp.leakage.push_back(s.leakage);
    cmp.trace_drift.push_back(s.trace - trace0);
    cmp.hermiticity.push_back(s.hermiticity);
    cmp.max_photons = std::max(cmp.max_photons, photon_number(s.moments));
  }
  if (!cmp.leakage_exceeded && !run.samples.empty()) cmp.last_valid_time = run.samples.back().t;
  cmp.step = run.dt;
  cmp.deviation = moment_deviation(cmp.oracle, cmp.theory, cmp.metric);
  cmp.max_deviation = *std::max_element(cmp.deviation.begin(), cmp.deviation.end());
  return cmp;
}

std::string oracle_summary(const OracleComparison& cmp) {
  std::ostringstream os;
  os << "oracle: " << to_string(cmp.kind) << " (n_max = " << cmp.n_max << ", step " << cmp.step
     << ")\n";
  os << "metric: "
     << (cmp.metric == DeviationMetric::Pointwise ? "pointwise relative" : "scale-normalised")
     << '\n';
  for (int k = 0; k < 5; ++k) os << "deviation " << kMomentNames[k] << ": " << cmp.deviation[k] << '\n';
  const auto amax = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  os << "max photons: " << cmp.max_photons << '\n';
  os << "max leakage: " << amax(cmp.leakage) << '\n';
  os << "max trace drift: " << amax(cmp.trace_drift) << '\n';
  os << "max hermiticity error: " << amax(cmp.hermiticity) << '\n';
  if (cmp.leakage_exceeded) {
    os << "leakage limit exceeded; last valid time " << cmp.last_valid_time << '\n';
  }
  os << (cmp.passed() ? "PASS" : "FAIL") << ": max deviation " << cmp.max_deviation
     << " (threshold " << cmp.threshold << ")\n";
  return os.str();
}

void write_oracle_csv(std::ostream& os, const OracleComparison& cmp) {
  os << "# oracle=" << to_string(cmp.kind) << '\n';
  os << "# n_max=" << cmp.n_max << '\n';
  for (int k = 0; k < 5; ++k) {
    os << "# deviation_" << kMomentNames[k] << '=' << format_double(cmp.deviation[k]) << '\n';
  }
  os << "t,leakage,trace_drift,hermiticity,photon_number_oracle,photon_number_theory\n";
  for (std::size_t i = 0; i < cmp.oracle.size(); ++i) {
    os << format_double(cmp.times[i]) << ',' << format_double(cmp.leakage[i]) << ','
       << format_double(cmp.trace_drift[i]) << ',' << format_double(cmp.hermiticity[i]) << ','
       << format_double(photon_number(cmp.oracle[i])) << ','
       << format_double(photon_number(cmp.theory[i])) << '\n';
  }
}

namespace {

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::string coefficients_json(const RunConfig& cfg) {
  const CoefficientSet c = compute_coefficients(cfg.params);
  const PParams p = compute_p_params(cfg.params);
  const ParametricLimits lim = parametric_limits(cfg.params);
  json params = json::object();
  for (auto name : kParamNames) params[std::string(name)] = param_value(cfg.params, name);
  json doc = {
      {"params", params},
      {"p",
       {{"p1", complex_json(p.p1)},
        {"p2", complex_json(p.p2)},
        {"p3", complex_json(p.p3)},
        {"p4", complex_json(p.p4)},
        {"p5", complex_json(p.p5)}}},
      {"coefficients",
       {{"alpha11", complex_json(c.alpha11)}, {"alpha12", complex_json(c.alpha12)},
        {"alpha21", complex_json(c.alpha21)}, {"alpha22", complex_json(c.alpha22)},
        {"beta11", complex_json(c.beta11)},   {"beta12", complex_json(c.beta12)},
        {"beta21", complex_json(c.beta21)},   {"beta22", complex_json(c.beta22)},
        {"c11", complex_json(c.c11)},         {"c12", complex_json(c.c12)},
        {"c21", complex_json(c.c21)},         {"c22", complex_json(c.c22)},
        {"d11", complex_json(c.d11)},         {"d22", complex_json(c.d22)},
        {"d12", complex_json(c.d12)}}},
      {"parametric",
       {{"alpha", lim.alpha ? json(*lim.alpha) : json(nullptr)},
        {"alpha_prime", lim.alpha_prime ? json(*lim.alpha_prime) : json(nullptr)},
        {"regime", std::string(to_string(classify_regime(cfg.params, cfg.sim.dominance)))}}},
  };
  return doc.dump(2);
}

}  // namespace entlaser
