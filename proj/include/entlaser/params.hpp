#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace entlaser {

using cplx = std::complex<double>;

/// Laser, cavity and atom parameters. Every rate and detuning is measured in
/// units of a reference coupling g; times are measured in units of 1/g.
///
/// Only the two two-photon detunings exist as inputs: the cavity mode and the
/// drive sharing an upper level are always detuned by the same amount.
struct PhysicalParams {
  double g1 = 1.0;          ///< mode 1 coupling on |a> <-> |c>
  double g2 = 1.0;          ///< mode 2 coupling on |b> <-> |d>
  double omega3_mag = 0.0;  ///< |Omega_3|, drive on |a> <-> |d>
  double omega4_mag = 0.0;  ///< |Omega_4|, drive on |b> <-> |c>
  double phi3 = 0.0;        ///< phase of Omega_3 [rad]
  double phi4 = 0.0;        ///< phase of Omega_4 [rad]
  double delta_a = 0.0;     ///< detuning from |a>
  double delta_b = 0.0;     ///< detuning from |b>
  double gamma1 = 0.0;      ///< decay |a> -> |d>
  double gamma2 = 0.0;      ///< decay |a> -> |c>
  double gamma3 = 0.0;      ///< decay |b> -> |c>
  double gamma4 = 0.0;      ///< decay |b> -> |d>
  double kappa1 = 0.0;      ///< cavity damping of mode 1
  double kappa2 = 0.0;      ///< cavity damping of mode 2

  cplx omega3() const { return std::polar(omega3_mag, phi3); }
  cplx omega4() const { return std::polar(omega4_mag, phi4); }
  double phase_sum() const { return phi3 + phi4; }

  bool operator==(const PhysicalParams&) const = default;
};

/// Field names in declaration order; these are also the config-file keys.
inline constexpr std::array<std::string_view, 14> kParamNames = {
    "g1",     "g2",     "omega3_mag", "omega4_mag", "phi3",   "phi4",   "delta_a",
    "delta_b", "gamma1", "gamma2",     "gamma3",     "gamma4", "kappa1", "kappa2"};

/// Access a field by its config name. Throws InvalidParameter for unknown names.
double& param_ref(PhysicalParams& p, std::string_view name);
double param_value(const PhysicalParams& p, std::string_view name);

/// Checks finiteness and the sign constraints on rates and magnitudes.
void validate(const PhysicalParams& p);

/// Mirror image under the level-scheme symmetry a<->b, c<->d: the two drives,
/// the two modes, the two detunings and the decay pairs (1,3), (2,4) swap.
PhysicalParams mirrored(const PhysicalParams& p);

}  // namespace entlaser
