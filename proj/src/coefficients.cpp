#include "entlaser/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "entlaser/errors.hpp"

namespace entlaser {

namespace {
constexpr cplx I{0.0, 1.0};
}

CoefficientSet make_coefficient_set(cplx alpha11, cplx alpha12, cplx alpha21, cplx alpha22,
                                    cplx beta11, cplx beta12, cplx beta21, cplx beta22,
                                    double kappa1, double kappa2) {
  CoefficientSet c;
  c.alpha11 = alpha11;
  c.alpha12 = alpha12;
  c.alpha21 = alpha21;
  c.alpha22 = alpha22;
  c.beta11 = beta11;
  c.beta12 = beta12;
  c.beta21 = beta21;
  c.beta22 = beta22;
  c.c11 = alpha11 + beta11;
  c.c12 = alpha12 + beta12;
  c.c21 = alpha21 + beta21;
  c.c22 = alpha22 + beta22;
  // z + z* is formed as 2 Re z so the diagonal terms are exactly real.
  c.d11 = 2.0 * c.c11.real() + 2.0 * kappa1;
  c.d22 = 2.0 * c.c22.real() + 2.0 * kappa2;
  c.d12 = c.c11 + c.c22 + kappa1 + kappa2;
  c.kappa1 = kappa1;
  c.kappa2 = kappa2;
  return c;
}

CoefficientSet parametric_coefficient_set(double rate, double phase_sum, double kappa1,
                                          double kappa2, bool mirrored) {
  const cplx pair = -I * rate * std::polar(1.0, phase_sum);
  if (mirrored) {
    return make_coefficient_set(0.0, 0.0, pair, 0.0, 0.0, pair, 0.0, 0.0, kappa1, kappa2);
  }
  return make_coefficient_set(0.0, pair, 0.0, 0.0, 0.0, 0.0, pair, 0.0, kappa1, kappa2);
}

PParams compute_p_params(const PhysicalParams& p) {
  const double o3 = p.omega3_mag * p.omega3_mag;
  const double o4 = p.omega4_mag * p.omega4_mag;
  PParams r;
  r.p1 = cplx(p.gamma3 + p.gamma4, 2.0 * p.delta_b);
  r.p2 = cplx(p.gamma1 + p.gamma2, 2.0 * p.delta_a);
  const cplx p1c = std::conj(r.p1);
  const cplx p2c = std::conj(r.p2);
  r.p3 = p.gamma2 * std::norm(r.p1) * o3 + p.gamma4 * std::norm(r.p2) * o4 +
         8.0 * o3 * o4 * (p.gamma2 + p.gamma4);
  const double split = 4.0 * (o3 - o4) * (o3 - o4);
  r.p4 = split + r.p1 * (r.p1 + p2c) * o3 + p2c * (r.p1 + p2c) * o4;
  r.p5 = split + p1c * (r.p2 + p1c) * o3 + r.p2 * (r.p2 + p1c) * o4;
  return r;
}

CoefficientSet compute_coefficients(const PhysicalParams& p, double floor) {
  validate(p);
  if (p.omega3_mag == 0.0 && p.omega4_mag == 0.0) {
    throw InvalidParameter("omega3_mag", "omega3_mag and omega4_mag cannot both vanish");
  }
  const PParams pp = compute_p_params(p);
  const cplx den4 = pp.p3 * pp.p4;
  const cplx den5 = pp.p3 * pp.p5;
  if (std::abs(den4) < floor || std::abs(den5) < floor) {
    throw DegenerateDenominator("|P3 P4| or |P3 P5| below floor; parameter point is singular");
  }

  const cplx p1 = pp.p1, p2 = pp.p2;
  const cplx p1c = std::conj(p1), p2c = std::conj(p2);
  const double o3 = p.omega3_mag * p.omega3_mag;
  const double o4 = p.omega4_mag * p.omega4_mag;
  const double g11 = p.g1 * p.g1, g22 = p.g2 * p.g2, g12 = p.g1 * p.g2;
  const double da = p.delta_a, db = p.delta_b;
  const double G2 = p.gamma2, G4 = p.gamma4;
  // Omega3 Omega4 carries the only phase dependence, through phi3 + phi4.
  const cplx w34 = std::polar(p.omega3_mag * p.omega4_mag, p.phase_sum());

  const cplx a11 =
      2.0 * g11 * G2 * o3 * o4 * (4.0 * (p2c + 4.0 * I * db) * o4 + p1c * (4.0 * o3 + p1 * (p1 + p2c))) /
      den4;
  const cplx b11 =
      -2.0 * g11 * G4 * o3 * o4 * (4.0 * p1 * o4 + p2c * (4.0 * o3 + p1 * (p1 + p2c))) / den4;
  const cplx a12 = -2.0 * g12 * G2 * w34 * o3 *
                   (4.0 * p1 * o3 + p1 * p1 * (p1 + p2c) - 4.0 * o4 * (2.0 * p1 + p2c)) / den4;
  const cplx b12 = -2.0 * g12 * G4 * w34 * o4 *
                   ((p1 + p2c) * std::norm(p2) + 4.0 * o4 * p2 + 4.0 * o3 * (p1 - 4.0 * I * da)) /
                   den4;
  const cplx a22 =
      2.0 * g22 * G4 * o3 * o4 * (4.0 * (p1c + 4.0 * I * da) * o3 + p2c * (4.0 * o4 + p2 * (p2 + p1c))) /
      den5;
  const cplx b22 =
      -2.0 * g22 * G2 * o3 * o4 * (4.0 * p2 * o3 + p1c * (4.0 * o4 + p2 * (p2 + p1c))) / den5;
  const cplx a21 = -2.0 * g12 * G4 * w34 * o4 *
                   (4.0 * p2 * o4 + p2 * p2 * (p2 + p1c) - 4.0 * o3 * (2.0 * p2 + p1c)) / den5;
  const cplx b21 = -2.0 * g12 * G2 * w34 * o3 *
                   ((p2 + p1c) * std::norm(p1) + 4.0 * o3 * p1 + 4.0 * o4 * (p2 - 4.0 * I * db)) /
                   den5;

  return make_coefficient_set(a11, a12, a21, a22, b11, b12, b21, b22, p.kappa1, p.kappa2);
}

ParametricLimits parametric_limits(const PhysicalParams& p) {
  ParametricLimits out;
  const double gg = p.g1 * p.g2;
  if (const double den = p.omega3_mag * p.delta_b; den != 0.0) {
    out.alpha = gg * p.omega4_mag / den;
  }
  if (const double den = p.omega4_mag * p.delta_a; den != 0.0) {
    out.alpha_prime = gg * p.omega3_mag / den;
  }
  return out;
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::ParametricA: return "parametric-a";
    case RegimeTag::ParametricB: return "parametric-b";
    case RegimeTag::General: return "general";
  }
  return "general";
}

RegimeTag classify_regime(const PhysicalParams& p, double dominance) {
  if (!(dominance >= 1.0)) {
    throw InvalidParameter("dominance", "must be >= 1");
  }
  const double gmax = std::max({p.gamma1, p.gamma2, p.gamma3, p.gamma4});
  const double large_a = std::min(std::abs(p.omega3_mag), std::abs(p.delta_b));
  const double small_a = std::max({std::abs(p.delta_a), std::abs(p.omega4_mag), gmax});
  if (large_a > 0.0 && large_a >= dominance * small_a) return RegimeTag::ParametricA;
  const double large_b = std::min(std::abs(p.omega4_mag), std::abs(p.delta_a));
  const double small_b = std::max({std::abs(p.delta_b), std::abs(p.omega3_mag), gmax});
  if (large_b > 0.0 && large_b >= dominance * small_b) return RegimeTag::ParametricB;
  return RegimeTag::General;
}

}  // namespace entlaser
