#include <doctest.h>

#include <algorithm>

#include "entlaser/entanglement.hpp"
#include "entlaser/errors.hpp"
#include "entlaser/oracle.hpp"
#include "support.hpp"

using namespace entlaser;
using testing::fig2_params;

namespace {

double photons_formula(double alpha, double kappa, double n0, double m0, double t) {
  const double q = kappa * kappa - alpha * alpha;
  const double e = std::exp(-2 * kappa * t);
  return (n0 - alpha * alpha / q) * std::cosh(2 * alpha * t) * e -
         (alpha * kappa / q + m0) * std::sinh(2 * alpha * t) * e + alpha * alpha / q;
}

Trajectory flat(double v, std::size_t n) {
  Trajectory tr;
  for (std::size_t i = 0; i < n; ++i) {
    tr.times.push_back(static_cast<double>(i));
    tr.variance_sum.push_back(v);
    tr.photon_number.push_back(static_cast<double>(i));
    tr.entangled.push_back(v < 2.0);
  }
  return tr;
}

}  // namespace

TEST_SUITE("entanglement") {
  TEST_CASE("variance sum examples") {
    CHECK(variance_sum(vacuum_state()) == 2.0);
    CHECK(variance_sum(coherent_state({100, 0}, {-100, 0})) == doctest::Approx(2.0).epsilon(1e-12));
    const double r = 0.5;
    CHECK(variance_sum(two_mode_squeezed_state(r)) ==
          doctest::Approx(2 * std::exp(-2 * r)).epsilon(1e-14));
  }

  TEST_CASE("coherent states saturate the bound") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int k = 0; k < 100; ++k) {
      const MomentState s = coherent_state({n(rng), n(rng)}, {n(rng), n(rng)});
      CHECK(std::abs(variance_sum(s) - 2.0) < 1e-10);
    }
  }

  TEST_CASE("photon number examples") {
    CHECK(photon_number(vacuum_state()) == 0.0);
    CHECK(photon_number(coherent_state({100, 0}, {-100, 0})) == 20000.0);
    CHECK(photon_number(two_mode_squeezed_state(0.5)) ==
          doctest::Approx(2 * std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-14));
  }

  TEST_CASE("two-mode squeezed vacuum built in Fock space") {
    const double r = 0.5;
    const int n_max = 40;
    const int d = n_max + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
    for (int n = 0; n < d; ++n) psi(n * d + n) = std::pow(-std::tanh(r), n) / std::cosh(r);
    psi.normalize();
    const MomentState s = extract_moments(fock_pure(psi, n_max));
    CHECK(std::abs(variance_sum(s) - 2 * std::exp(-2 * r)) < 1e-6);
    CHECK(std::abs(s.m - two_mode_squeezed_state(r).m) < 1e-6);
  }

  TEST_CASE("parametric closed forms at t = 0") {
    const auto [v, n] = parametric_closed_forms(0.002, 0.001, 1.3, 4.0, 0.5, 0.0);
    CHECK(v == 1.3);
    CHECK(n == 4.0);
  }

  TEST_CASE("parametric variance asymptote") {
    const auto [v, n] = parametric_closed_forms(0.002, 0.001, 2.0, 0.0, 0.0, 1e5);
    CHECK(std::abs(v - 2.0 / 3.0) < 1e-12);
    CHECK(n > 0.0);
  }

  TEST_CASE("parametric photon number matches an independent transcription") {
    for (double t : {1.0, 100.0, 700.0}) {
      const double got = parametric_closed_forms(0.002, 0.001, 2.0, 0.5, -0.2, t).second;
      const double expect = photons_formula(0.002, 0.001, 0.5, -0.2, t);
      CHECK(std::abs(got - expect) < 1e-12 * std::abs(expect));
    }
  }

  TEST_CASE("parametric variance is monotone and bounded") {
    for (double v0 : {0.2, 1.0, 2.0, 5.0}) {
      for (double alpha : {0.001, 0.002, 0.01}) {
        const double kappa = 0.001;
        const double v_inf = 2 * kappa / (alpha + kappa);
        double prev = v0;
        for (int i = 1; i <= 200; ++i) {
          const double v = parametric_closed_forms(alpha, kappa, v0, 0, 0, 10.0 * i).first;
          CHECK(v >= std::min(v0, v_inf) - 1e-15);
          CHECK(v <= std::max(v0, v_inf) + 1e-15);
          if (v0 > v_inf) CHECK(v <= prev);
          if (v0 < v_inf) CHECK(v >= prev);
          prev = v;
        }
      }
    }
  }

  TEST_CASE("photon number at alpha = kappa equals the limit of the formula") {
    const double alpha = 0.1, t = 10.0;
    auto at = [&](double eps) { return photons_formula(alpha, alpha + eps, 0.0, 0.0, t); };
    // Linear Richardson on three rungs.
    const double f1 = at(1e-3), f2 = at(1e-4), f3 = at(1e-5);
    const double r12 = (10 * f2 - f1) / 9, r23 = (10 * f3 - f2) / 9;
    const double limit = (100 * r23 - r12) / 99;
    const double got = parametric_closed_forms(alpha, alpha, 2.0, 0.0, 0.0, t).second;
    CHECK(std::isfinite(got));
    CHECK(std::abs(got - limit) < 1e-7 * std::abs(limit));
  }

  TEST_CASE("window of a monotone parametric trajectory") {
    const SimulationResult res =
        simulate(fig2_params(), vacuum_state(), 3000.0, 2000, SimMethod::Parametric);
    const EntanglementReport rep = entanglement_window(res.trajectory);
    REQUIRE(rep.windows.size() == 1);
    CHECK(rep.windows[0].first == 0.0);
    CHECK(rep.windows[0].second == 3000.0);
    CHECK(rep.max_entangled_photons == res.trajectory.photon_number.back());
  }

  TEST_CASE("no window above the bound") {
    const EntanglementReport rep = entanglement_window(flat(2.5, 10));
    CHECK(rep.windows.empty());
    CHECK(rep.max_entangled_photons == 0.0);
    CHECK(rep.v_min == 2.5);
  }

  TEST_CASE("window edges are interpolated") {
    Trajectory tr = flat(2.5, 6);
    tr.variance_sum = {2.5, 1.5, 1.0, 1.5, 3.0, 1.0};
    tr.photon_number = {0, 1, 2, 3, 4, 5};
    const EntanglementReport rep = entanglement_window(tr);
    REQUIRE(rep.windows.size() == 2);
    CHECK(rep.windows[0].first == doctest::Approx(0.5));
    CHECK(rep.windows[0].second == doctest::Approx(3 + 1.0 / 3.0));
    CHECK(rep.windows[1].first == doctest::Approx(4.5));
    CHECK(rep.windows[1].second == 5.0);
    CHECK(rep.max_entangled_photons == 5.0);
    CHECK(rep.v_min == 1.0);
    CHECK(rep.t_v_min == 2.0);
  }

  TEST_CASE("figure-2 full trajectory: invariants, finite window, re-entry") {
    const SimulationResult res =
        simulate(fig2_params(), vacuum_state(), 3000.0, 2000, SimMethod::Spectral);
    const Trajectory& tr = res.trajectory;
    double n_max = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      CHECK(tr.entangled[i] == (tr.variance_sum[i] < 2.0));
      CHECK(tr.variance_sum[i] >= 0.0);
      CHECK(tr.photon_number[i] >= -kTolPhysicality);
      n_max = std::max(n_max, tr.photon_number[i]);
    }
    const EntanglementReport rep = entanglement_window(tr);
    REQUIRE(rep.windows.size() == 1);
    CHECK(rep.windows[0].second < 3000.0);
    CHECK(tr.variance_sum.back() > 2.0);
    CHECK(rep.max_entangled_photons <= n_max);
    CHECK(rep.max_entangled_photons == doctest::Approx(110).epsilon(0.1));
    CHECK(res.info.regime == RegimeTag::ParametricA);

    const SimulationResult par =
        simulate(fig2_params(), vacuum_state(), 3000.0, 2000, SimMethod::Parametric);
    for (std::size_t i = 1; i < par.trajectory.times.size(); ++i) {
      CHECK(par.trajectory.variance_sum[i] < 2.0);
    }
  }

  TEST_CASE("windows are disjoint and ascending across presets") {
    PhysicalParams p = testing::fig3_set1_params();
    for (double omega4 : {2.0, 6.0, 9.8}) {
      p.omega4_mag = omega4;
      const EntanglementReport rep = entanglement_window(
          simulate(p, vacuum_state(), 1500.0, 1000, SimMethod::Spectral).trajectory);
      for (std::size_t k = 0; k < rep.windows.size(); ++k) {
        CHECK(rep.windows[k].first <= rep.windows[k].second);
        if (k > 0) CHECK(rep.windows[k - 1].second <= rep.windows[k].first);
      }
    }
  }

  TEST_CASE("phase sum 3 pi / 2 destroys the squeezing") {
    PhysicalParams good = fig2_params();
    PhysicalParams bad = good;
    bad.phi4 = std::numbers::pi;
    CHECK(compute_coefficients(bad).alpha12.real() < 0.0);
    const auto vg = simulate(good, vacuum_state(), 300.0, 301, SimMethod::Spectral).trajectory;
    const auto vb = simulate(bad, vacuum_state(), 300.0, 301, SimMethod::Spectral).trajectory;
    CHECK(vb.variance_sum.back() > 2.0);
    const double min_good = *std::min_element(vg.variance_sum.begin(), vg.variance_sum.end());
    const double min_bad = *std::min_element(vb.variance_sum.begin(), vb.variance_sum.end());
    CHECK(min_good < min_bad);
  }

  TEST_CASE("global phase leaves the trajectory unchanged") {
    const PhysicalParams p = fig2_params();
    const MomentState init = coherent_state({1.0, 0.5}, {-0.3, 2.0});
    const auto base = simulate(p, init, 1000.0, 201, SimMethod::Spectral).trajectory;
    for (double delta : {0.3, -1.1, 2.5}) {
      PhysicalParams q = p;
      q.phi3 += delta;
      q.phi4 -= delta;
      const auto tr = simulate(q, init, 1000.0, 201, SimMethod::Spectral).trajectory;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(std::abs(tr.variance_sum[i] - base.variance_sum[i]) <=
              1e-9 * std::abs(base.variance_sum[i]));
        CHECK(std::abs(tr.photon_number[i] - base.photon_number[i]) <=
              1e-9 * std::abs(base.photon_number[i]) + 1e-12);
      }
    }
  }

  TEST_CASE("uncoupled cavity decays without entangling") {
    PhysicalParams p = fig2_params();
    p.g1 = p.g2 = 0.0;
    const MomentState init = coherent_state({1.5, 0.0}, {0.0, -2.0});
    const auto tr = simulate(p, init, 2000.0, 101, SimMethod::Spectral).trajectory;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      CHECK(std::abs(tr.variance_sum[i] - 2.0) < 1e-12);
      CHECK(std::abs(tr.photon_number[i] - 6.25 * std::exp(-2e-3 * tr.times[i])) < 1e-12);
    }
  }

  TEST_CASE("parametric method is refused outside a parametric regime") {
    CHECK_THROWS_AS(simulate(testing::fig3_set1_params(), vacuum_state(), 100.0, 10,
                             SimMethod::Parametric),
                    RegimeMismatch);
    CHECK(sim_method_from_string("numeric") == SimMethod::Numeric);
    CHECK_THROWS_AS(sim_method_from_string("euler"), InvalidParameter);
  }
}
