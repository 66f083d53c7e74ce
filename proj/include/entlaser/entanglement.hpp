#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entlaser/coefficients.hpp"
#include "entlaser/dynamics.hpp"

namespace entlaser {

/// Separability bound of the EPR-type total variance.
inline constexpr double kSeparableBound = 2.0;

/// <(du)^2 + (dv)^2> for u = x1 + x2, v = p1 - p2 with x_k = (b_k + b_k^dag)/sqrt2,
/// p_k = (b_k - b_k^dag)/(sqrt2 i). Evaluated from connected correlators so a
/// coherent state gives exactly 2.
double variance_sum(const MomentState& s);

double photon_number(const MomentState& s);

MomentState vacuum_state();
/// Moments of the product coherent state |beta1, beta2>.
MomentState coherent_state(cplx beta1, cplx beta2);
/// Moments of the two-mode squeezed vacuum with <b1 b2> = -sinh r cosh r.
MomentState two_mode_squeezed_state(double r);

/// Closed-form variance sum and photon number of the parametric oscillator
/// with pair rate `alpha` and equal damping `kappa`, starting from variance
/// v0, photon number n0 and m0_sym = <b1 b2 + b1^dag b2^dag>(0).
/// Near alpha = kappa the photon number is taken from the moment solver.
std::pair<double, double> parametric_closed_forms(double alpha, double kappa, double v0,
                                                  double n0, double m0_sym, double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> variance_sum;
  std::vector<double> photon_number;
  std::vector<bool> entangled;
};

struct EntanglementReport {
  std::vector<std::pair<double, double>> windows;  ///< (t_on, t_off), ascending
  double max_entangled_photons = 0.0;              ///< 0 when there is no window
  double v_min = 0.0;
  double t_v_min = 0.0;
};

/// Threshold crossings are placed by linear interpolation between samples.
EntanglementReport entanglement_window(const Trajectory& traj);

enum class SimMethod { Spectral, Numeric, Parametric };

std::string_view to_string(SimMethod m);
SimMethod sim_method_from_string(std::string_view name);

struct SimulationOptions {
  IntegratorOptions integrator{};
  double dominance = kDefaultDominance;
};

struct SimulationInfo {
  SimMethod requested = SimMethod::Spectral;
  SimMethod used = SimMethod::Spectral;
  RegimeTag regime = RegimeTag::General;
  std::optional<std::string> fallback_notice;
  /// Most negative occupation seen; flagged when below -kTolPhysicality.
  double min_occupation = 0.0;
  bool negativity_flag = false;
};

struct SimulationResult {
  Trajectory trajectory;
  SimulationInfo info;
};

/// coefficients -> moment evolution -> variance / photon-number series.
SimulationResult simulate(const PhysicalParams& params, const MomentState& init, double t_max,
                          std::size_t samples, SimMethod method,
                          const SimulationOptions& opts = {});

/// Full moment series along the grid (no parametric shortcut).
std::vector<MomentState> evolve_moments(const PhysicalParams& params, const MomentState& init,
                                        std::span<const double> t_grid, SolverMethod method,
                                        SimulationInfo* info = nullptr,
                                        const IntegratorOptions& opts = {});

}  // namespace entlaser
