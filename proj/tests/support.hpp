#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "entlaser/params.hpp"

namespace testing {

using entlaser::cplx;
using entlaser::PhysicalParams;

inline PhysicalParams fig2_params() {
  PhysicalParams p;
  p.g1 = p.g2 = 1.0;
  p.omega3_mag = 25.0;
  p.omega4_mag = 2.0;
  p.phi3 = std::numbers::pi / 2;
  p.phi4 = 0.0;
  p.delta_a = 0.0;
  p.delta_b = 40.0;
  p.gamma1 = p.gamma2 = p.gamma3 = p.gamma4 = 5.0;
  p.kappa1 = p.kappa2 = 1e-3;
  return p;
}

inline PhysicalParams fig3_set1_params() {
  PhysicalParams p = fig2_params();
  p.omega4_mag = 9.8;
  p.delta_b = 43.0;
  return p;
}

/// Generic parameter point with every rate of order one.
inline PhysicalParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0), ph(-3.0, 3.0), det(-4.0, 4.0);
  PhysicalParams p;
  p.g1 = u(rng);
  p.g2 = u(rng);
  p.omega3_mag = u(rng);
  p.omega4_mag = u(rng);
  p.phi3 = ph(rng);
  p.phi4 = ph(rng);
  p.delta_a = det(rng);
  p.delta_b = det(rng);
  p.gamma1 = u(rng);
  p.gamma2 = u(rng);
  p.gamma3 = u(rng);
  p.gamma4 = u(rng);
  p.kappa1 = 0.1 * u(rng);
  p.kappa2 = 0.1 * u(rng);
  return p;
}

inline double rel_diff(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
