#include "entlaser/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entlaser/errors.hpp"

namespace entlaser {

double variance_sum(const MomentState& s) {
  const double c1 = s.n1 - std::norm(s.b1);
  const double c2 = s.n2 - std::norm(s.b2);
  const double cm = (s.m - s.b1 * s.b2).real();
  return 2.0 * (1.0 + c1 + c2 + 2.0 * cm);
}

double photon_number(const MomentState& s) { return s.n1 + s.n2; }

MomentState vacuum_state() { return {}; }

MomentState coherent_state(cplx beta1, cplx beta2) {
  MomentState s;
  s.b1 = beta1;
  s.b2 = beta2;
  s.n1 = std::norm(beta1);
  s.n2 = std::norm(beta2);
  s.m = beta1 * beta2;
  return s;
}

MomentState two_mode_squeezed_state(double r) {
  MomentState s;
  const double sh = std::sinh(r), ch = std::cosh(r);
  s.n1 = s.n2 = sh * sh;
  s.m = -sh * ch;
  return s;
}

namespace {

bool near_pole(double alpha, double kappa) {
  const double scale = std::max(std::abs(alpha), std::abs(kappa));
  return scale == 0.0 || std::abs(std::abs(alpha) - std::abs(kappa)) < 1e-6 * scale;
}

double closed_form_variance(double alpha, double kappa, double v0, double t) {
  const double rate = alpha + kappa;
  if (std::abs(rate) <= 1e-300) return v0 + 4.0 * kappa * t;
  const double v_inf = 2.0 * kappa / rate;
  return (v0 - v_inf) * std::exp(-2.0 * rate * t) + v_inf;
}

double closed_form_photons(double alpha, double kappa, double n0, double m0_sym, double t) {
  const double den = kappa * kappa - alpha * alpha;
  const double n_inf = alpha * alpha / den;
  // cosh(2 a t) e^{-2 k t} and sinh(2 a t) e^{-2 k t} without overflow.
  const double up = std::exp(2.0 * (alpha - kappa) * t);
  const double down = std::exp(-2.0 * (alpha + kappa) * t);
  const double ch = 0.5 * (up + down);
  const double sh = 0.5 * (up - down);
  return (n0 - n_inf) * ch - (alpha * kappa / den + m0_sym) * sh + n_inf;
}

// Photon number of the parametric oscillator on a grid via the moment solver;
// used where the closed form has its removable singularity.
std::vector<double> parametric_photons_by_solver(double alpha, double kappa, double n0,
                                                 double m0_sym, std::span<const double> grid) {
  const CoefficientSet c =
      parametric_coefficient_set(alpha, std::numbers::pi / 2.0, kappa, kappa);
  const SecondMomentSystem sys = build_second_moment_system(c);
  const SecondMomentVector r0(0.5 * n0, 0.5 * n0, 0.5 * m0_sym, 0.5 * m0_sym);
  const auto rs = evolve_second_moments(sys, r0, grid, SolverMethod::Numeric);
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r(0).real() + r(1).real());
  return out;
}

}  // namespace

std::pair<double, double> parametric_closed_forms(double alpha, double kappa, double v0,
                                                  double n0, double m0_sym, double t) {
  if (!(t >= 0.0)) throw InvalidParameter("t", "must be >= 0");
  if (t == 0.0) return {v0, n0};
  const double v = closed_form_variance(alpha, kappa, v0, t);
  if (near_pole(alpha, kappa)) {
    if (alpha == 0.0 && kappa == 0.0) return {v, n0};
    const double grid[] = {0.0, t};
    return {v, parametric_photons_by_solver(alpha, kappa, n0, m0_sym, grid).back()};
  }
  return {v, closed_form_photons(alpha, kappa, n0, m0_sym, t)};
}

EntanglementReport entanglement_window(const Trajectory& traj) {
  const auto& t = traj.times;
  const auto& v = traj.variance_sum;
  const auto& n = traj.photon_number;
  if (t.empty() || v.size() != t.size() || n.size() != t.size()) {
    throw InvalidParameter("trajectory", "must be nonempty with matching series lengths");
  }

  EntanglementReport rep;
  const auto vmin = std::min_element(v.begin(), v.end());
  rep.v_min = *vmin;
  rep.t_v_min = t[static_cast<std::size_t>(vmin - v.begin())];

  auto crossing = [&](std::size_t i) {
    // Between samples i-1 and i; returns (time, photon number) at V = 2.
    const double f = (kSeparableBound - v[i - 1]) / (v[i] - v[i - 1]);
    return std::pair{t[i - 1] + f * (t[i] - t[i - 1]), n[i - 1] + f * (n[i] - n[i - 1])};
  };

  bool open = false;
  double t_on = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool below = v[i] < kSeparableBound;
    if (below && !open) {
      open = true;
      if (i == 0) {
        t_on = t[0];
      } else {
        const auto [tc, nc] = crossing(i);
        t_on = tc;
        best = std::max(best, nc);
      }
    } else if (!below && open) {
      const auto [tc, nc] = crossing(i);
      rep.windows.emplace_back(t_on, tc);
      best = std::max(best, nc);
      open = false;
    }
    if (below) best = std::max(best, n[i]);
  }
  if (open) rep.windows.emplace_back(t_on, t.back());
  rep.max_entangled_photons = rep.windows.empty() ? 0.0 : best;
  return rep;
}

std::string_view to_string(SimMethod m) {
  switch (m) {
    case SimMethod::Spectral: return "spectral";
    case SimMethod::Numeric: return "numeric";
    case SimMethod::Parametric: return "parametric";
  }
  return "spectral";
}

SimMethod sim_method_from_string(std::string_view name) {
  if (name == "spectral") return SimMethod::Spectral;
  if (name == "numeric") return SimMethod::Numeric;
  if (name == "parametric") return SimMethod::Parametric;
  throw InvalidParameter("method", "expected spectral, numeric or parametric");
}

std::vector<MomentState> evolve_moments(const PhysicalParams& params, const MomentState& init,
                                        std::span<const double> t_grid, SolverMethod method,
                                        SimulationInfo* info, const IntegratorOptions& opts) {
  const CoefficientSet coeffs = compute_coefficients(params);
  const SecondMomentSystem sys = build_second_moment_system(coeffs);
  const SecondMomentVector r0 = second_moment_vector(init);

  std::vector<SecondMomentVector> rs;
  if (method == SolverMethod::Spectral) {
    try {
      rs = evolve_second_moments(sys, r0, t_grid, SolverMethod::Spectral, opts);
    } catch (const SpectralDegenerate& e) {
      rs = evolve_second_moments(sys, r0, t_grid, SolverMethod::Numeric, opts);
      if (info) {
        info->used = SimMethod::Numeric;
        info->fallback_notice = std::string("spectral solver fell back to numeric: ") + e.what();
      }
    }
  } else {
    rs = evolve_second_moments(sys, r0, t_grid, SolverMethod::Numeric, opts);
  }

  std::vector<MomentState> out(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    auto [b1, b2] = first_moment_solution(coeffs, init, t_grid[i]);
    out[i].b1 = b1;
    out[i].b2 = b2;
    assign_second_moments(out[i], rs[i]);
  }
  return out;
}

namespace {

void parametric_series(const PhysicalParams& params, const MomentState& init,
                       std::span<const double> grid, SimulationInfo& info, Trajectory& traj) {
  if (info.regime == RegimeTag::General) {
    throw RegimeMismatch("parametric method refused: parameters are in the general regime");
  }
  const ParametricLimits lim = parametric_limits(params);
  const std::optional<double> rate =
      info.regime == RegimeTag::ParametricA ? lim.alpha : lim.alpha_prime;
  if (!rate) throw RegimeMismatch("parametric rate is undefined for these parameters");
  if (std::abs(params.kappa1 - params.kappa2) >
      1e-12 * std::max(std::abs(params.kappa1), std::abs(params.kappa2))) {
    throw InvalidParameter("kappa2", "parametric method requires kappa1 == kappa2");
  }
  // The closed forms hold for a real pair coupling, i.e. phi3 + phi4 = pi/2 mod pi;
  // the sign of sin(phi3 + phi4) is the sign of the effective rate.
  const double phase = params.phase_sum();
  if (std::abs(std::cos(phase)) > 1e-9) {
    throw RegimeMismatch("parametric method requires phi3 + phi4 = pi/2 (mod pi)");
  }
  const double alpha = *rate * (std::sin(phase) > 0.0 ? 1.0 : -1.0);
  const double kappa = params.kappa1;
  const double v0 = variance_sum(init);
  const double n0 = photon_number(init);
  const double m0 = 2.0 * init.m.real();

  traj.variance_sum.resize(grid.size());
  traj.photon_number.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    traj.variance_sum[i] = closed_form_variance(alpha, kappa, v0, grid[i]);
  }
  traj.variance_sum[0] = v0;
  if (near_pole(alpha, kappa) && !(alpha == 0.0 && kappa == 0.0)) {
    traj.photon_number = parametric_photons_by_solver(alpha, kappa, n0, m0, grid);
    info.fallback_notice = "alpha == kappa: photon number from the moment solver";
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      traj.photon_number[i] = parametric_closed_forms(alpha, kappa, v0, n0, m0, grid[i]).second;
    }
  }
}

}  // namespace

SimulationResult simulate(const PhysicalParams& params, const MomentState& init, double t_max,
                          std::size_t samples, SimMethod method, const SimulationOptions& opts) {
  validate(params);
  const std::vector<double> grid = uniform_grid(t_max, samples);

  SimulationResult res;
  res.info.requested = method;
  res.info.used = method;
  res.info.regime = classify_regime(params, opts.dominance);
  Trajectory& traj = res.trajectory;
  traj.times = grid;

  if (method == SimMethod::Parametric) {
    parametric_series(params, init, grid, res.info, traj);
    res.info.min_occupation = *std::min_element(traj.photon_number.begin(),
                                                traj.photon_number.end());
  } else {
    const SolverMethod solver =
        method == SimMethod::Spectral ? SolverMethod::Spectral : SolverMethod::Numeric;
    const auto states = evolve_moments(params, init, grid, solver, &res.info, opts.integrator);
    traj.variance_sum.reserve(samples);
    traj.photon_number.reserve(samples);
    double min_occ = std::min(init.n1, init.n2);
    for (const auto& s : states) {
      traj.variance_sum.push_back(variance_sum(s));
      traj.photon_number.push_back(photon_number(s));
      min_occ = std::min({min_occ, s.n1, s.n2});
    }
    res.info.min_occupation = min_occ;
  }
  res.info.negativity_flag = res.info.min_occupation < -kTolPhysicality;

  traj.entangled.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    traj.entangled[i] = traj.variance_sum[i] < kSeparableBound;
  }
  return res;
}

}  // namespace entlaser
