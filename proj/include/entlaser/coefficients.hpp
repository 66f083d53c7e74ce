#pragma once

#include <optional>
#include <string_view>

#include "entlaser/params.hpp"

namespace entlaser {

/// Auxiliary combinations of decay rates, detunings and Rabi frequencies that
/// appear in the denominators and numerators of the field coefficients.
struct PParams {
  cplx p1;  ///< Gamma3 + Gamma4 + 2i Delta_b
  cplx p2;  ///< Gamma1 + Gamma2 + 2i Delta_a
  cplx p3;
  cplx p4;
  cplx p5;
};

/// Coefficients of the effective two-mode field master equation after the
/// atom has been eliminated to second order in g1, g2.
///
/// alpha_ij multiply field operators acting from the left of rho_F inside the
/// atomic coherences, beta_ij those acting from the right. The derived
/// combinations are
///   c_ij = alpha_ij + beta_ij,
///   d_ii = 2 Re c_ii + 2 kappa_i,
///   d12  = c11 + c22 + kappa1 + kappa2.
struct CoefficientSet {
  cplx alpha11, alpha12, alpha21, alpha22;
  cplx beta11, beta12, beta21, beta22;
  cplx c11, c12, c21, c22;
  cplx d11, d22, d12;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

/// Builds a set from the eight alpha/beta values, filling the derived terms.
CoefficientSet make_coefficient_set(cplx alpha11, cplx alpha12, cplx alpha21, cplx alpha22,
                                    cplx beta11, cplx beta12, cplx beta21, cplx beta22,
                                    double kappa1, double kappa2);

/// Coefficients of the nondegenerate parametric oscillator: only the pair
/// channel alpha12 = beta21 = -i rate exp(i phase_sum) survives. With
/// `mirrored` the pair channel sits on alpha21 = beta12 instead.
CoefficientSet parametric_coefficient_set(double rate, double phase_sum, double kappa1,
                                          double kappa2, bool mirrored = false);

PParams compute_p_params(const PhysicalParams& params);

inline constexpr double kDefaultDenominatorFloor = 1e-30;

/// Closed-form adiabatic-elimination coefficients. Throws
/// DegenerateDenominator if |P3 P4| or |P3 P5| is below `floor`.
CoefficientSet compute_coefficients(const PhysicalParams& params,
                                    double floor = kDefaultDenominatorFloor);

/// Pair-creation rates of the two parametric limits. A value is absent when
/// its defining ratio has a vanishing denominator.
struct ParametricLimits {
  std::optional<double> alpha;        ///< g1 g2 |Omega4| / (|Omega3| Delta_b)
  std::optional<double> alpha_prime;  ///< g1 g2 |Omega3| / (|Omega4| Delta_a)
};

ParametricLimits parametric_limits(const PhysicalParams& params);

enum class RegimeTag { ParametricA, ParametricB, General };

std::string_view to_string(RegimeTag tag);

inline constexpr double kDefaultDominance = 5.0;

/// Advisory classification. ParametricA: |Omega3| and |Delta_b| both exceed
/// `dominance` times each of |Delta_a|, |Omega4|, Gamma_i. ParametricB is the
/// mirrored condition.
RegimeTag classify_regime(const PhysicalParams& params, double dominance = kDefaultDominance);

}  // namespace entlaser
