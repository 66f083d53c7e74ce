#include "entlaser/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "entlaser/errors.hpp"

namespace entlaser {

namespace {

// sinh(z)/z, continuous through z = 0.
cplx sinhc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

}  // namespace

SecondMomentVector second_moment_vector(const MomentState& s) {
  return SecondMomentVector(cplx(s.n1), cplx(s.n2), s.m, std::conj(s.m));
}

void assign_second_moments(MomentState& s, const SecondMomentVector& r) {
  s.n1 = r(0).real();
  s.n2 = r(1).real();
  s.m = 0.5 * (r(2) + std::conj(r(3)));
}

Eigen::Matrix2cd first_moment_drift(const CoefficientSet& c) {
  Eigen::Matrix2cd a;
  a << c.c11 + c.kappa1, c.c12, std::conj(c.c21), std::conj(c.c22) + c.kappa2;
  return -a;
}

std::pair<cplx, cplx> first_moment_solution(const CoefficientSet& c, const MomentState& init,
                                            double t) {
  const cplx x1 = init.b1;
  const cplx x2 = std::conj(init.b2);  // <b2^dag>(0)
  if (t == 0.0) return {init.b1, init.b2};

  const cplx c22c = std::conj(c.c22);
  const cplx c21c = std::conj(c.c21);
  const cplx split = c.c11 - c22c + c.kappa1 - c.kappa2;
  const cplx w1 = 0.5 * std::sqrt(4.0 * c.c12 * c21c + split * split);
  const cplx w2 = -0.5 * (c.c11 + c22c + c.kappa1 + c.kappa2);

  const cplx ew2 = std::exp(w2 * t);
  const cplx ch = std::cosh(w1 * t);
  // sinh(w1 t) / (2 w1) = (t / 2) sinhc(w1 t)
  const cplx sh = 0.5 * t * sinhc(w1 * t);
  const cplx b1 = ew2 * (ch * x1 + (x1 * (-split) - 2.0 * x2 * c.c12) * sh);
  const cplx b2dag = ew2 * (ch * x2 + (x2 * split - 2.0 * x1 * c21c) * sh);
  return {b1, std::conj(b2dag)};
}

SecondMomentSystem build_second_moment_system(const CoefficientSet& c, double kappa1,
                                              double kappa2) {
  const cplx d11 = 2.0 * c.c11.real() + 2.0 * kappa1;
  const cplx d22 = 2.0 * c.c22.real() + 2.0 * kappa2;
  const cplx d12 = c.c11 + c.c22 + kappa1 + kappa2;
  const cplx c12c = std::conj(c.c12), c21c = std::conj(c.c21);

  SecondMomentSystem s;
  // clang-format off
  s.m_matrix << d11,   0.0,   c12c, c.c12,
                0.0,   d22,   c21c, c.c21,
                c.c21, c.c12, d12,  0.0,
                c21c,  c12c,  0.0,  std::conj(d12);
  // clang-format on
  s.m_matrix = -s.m_matrix;
  const cplx pair = c.alpha12 + c.alpha21;
  s.i_vector << 2.0 * c.beta11.real(), 2.0 * c.beta22.real(), pair, std::conj(pair);
  s.i_vector = -s.i_vector;
  return s;
}

std::array<cplx, 5> characteristic_quartic(const SecondMomentSystem& sys) {
  const auto& m = sys.m_matrix;
  const cplx d11 = -m(0, 0), d22 = -m(1, 1), d12 = -m(2, 2), d12c = -m(3, 3);
  const cplx c12 = -m(0, 3), c12c = -m(0, 2);
  const cplx c21 = -m(1, 3), c21c = -m(1, 2);
  const cplx d12abs2 = d12 * d12c;
  const cplx cross = c21 * c12c + c12 * c21c;
  const cplx dsum = d11 + d22;
  const cplx d12sum = d12 + d12c;

  std::array<cplx, 5> q;
  q[0] = 1.0;
  q[1] = dsum + d12sum;
  q[2] = d12abs2 - 2.0 * c21 * c12c - 2.0 * c12 * c21c + d11 * d22 + dsum * d12sum;
  q[3] = dsum * d12abs2 - cross * (dsum + d12sum) + d11 * d22 * d12sum;
  q[4] = c21 * c21 * c12c * c12c - (2.0 * c12 * c21c + d11 * d12 + d22 * d12c) * c21 * c12c +
         (c12 * c21c - d22 * d12) * (c12 * c21c - d11 * d12c);
  return q;
}

SpectralSolution::SpectralSolution(const SecondMomentSystem& sys, const SecondMomentVector& r0,
                                   double degeneracy_gap) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(sys.m_matrix);
  if (es.info() != Eigen::Success) {
    throw SpectralDegenerate("eigendecomposition of M did not converge");
  }
  eigenvalues_ = es.eigenvalues();
  const Eigen::Matrix4cd v = es.eigenvectors();

  const double scale = eigenvalues_.cwiseAbs().maxCoeff();
  double min_gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 4; ++j) {
    for (int k = j + 1; k < 4; ++k) {
      min_gap = std::min(min_gap, std::abs(eigenvalues_(j) - eigenvalues_(k)));
    }
  }
  near_degenerate_ = min_gap < degeneracy_gap * scale;

  // Repeated eigenvalues are harmless while M stays diagonalisable; a defective
  // or nearly defective M shows up as an ill-conditioned eigenbasis.
  const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(v);
  const auto& sv = svd.singularValues();
  condition_ = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxEigenbasisCondition)) {
    throw SpectralDegenerate("eigenbasis of M is ill-conditioned (condition " +
                             std::to_string(condition_) + ")");
  }

  const Eigen::Matrix4cd vinv = v.inverse();
  const Eigen::Vector4cd h = vinv * r0;
  const Eigen::Vector4cd src = vinv * sys.i_vector;
  const bool driven = sys.i_vector.cwiseAbs().maxCoeff() > 0.0;

  constant_.setZero();
  particular_.setZero();
  for (int k = 0; k < 4; ++k) {
    homogeneous_.col(k) = v.col(k) * h(k);
    if (!driven) continue;
    if (std::abs(eigenvalues_(k)) <= 1e-10 * scale || scale == 0.0) {
      throw SpectralDegenerate("M is singular while the drive I is nonzero");
    }
    particular_.col(k) = v.col(k) * (src(k) / eigenvalues_(k));
    constant_ -= particular_.col(k);
  }

  const double ref = std::max({r0.norm(), constant_.norm(), std::numeric_limits<double>::min()});
  if ((evaluate(0.0) - r0).norm() > 1e-10 * ref) {
    throw SpectralDegenerate("spectral solution does not reproduce R(0)");
  }
}

SecondMomentVector SpectralSolution::evaluate(double t) const {
  SecondMomentVector r = constant_;
  for (int k = 0; k < 4; ++k) {
    r += (homogeneous_.col(k) + particular_.col(k)) * std::exp(eigenvalues_(k) * t);
  }
  return r;
}

namespace {

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw InvalidParameter("t_grid", "must not be empty");
  if (t_grid.front() != 0.0) throw InvalidParameter("t_grid", "must start at 0");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw InvalidParameter("t_grid", "must be ascending");
  }
}

}  // namespace

std::vector<SecondMomentVector> evolve_second_moments(const SecondMomentSystem& sys,
                                                      const SecondMomentVector& r0,
                                                      std::span<const double> t_grid,
                                                      SolverMethod method,
                                                      const IntegratorOptions& opts) {
  check_grid(t_grid);
  std::vector<SecondMomentVector> out;
  out.reserve(t_grid.size());

  if (method == SolverMethod::Spectral) {
    const SpectralSolution sol(sys, r0);
    for (double t : t_grid) out.push_back(sol.evaluate(t));
    return out;
  }

  namespace odeint = boost::numeric::odeint;
  using state = std::array<cplx, 4>;
  const Eigen::Matrix4cd& m = sys.m_matrix;
  const Eigen::Vector4cd& iv = sys.i_vector;
  auto rhs = [&](const state& x, state& dxdt, double) {
    for (int i = 0; i < 4; ++i) {
      cplx acc = iv(i);
      for (int j = 0; j < 4; ++j) acc += m(i, j) * x[j];
      dxdt[i] = acc;
    }
  };
  state x{r0(0), r0(1), r0(2), r0(3)};
  auto observer = [&](const state& s, double) { out.emplace_back(s[0], s[1], s[2], s[3]); };

  if (t_grid.size() == 1) {
    observer(x, 0.0);
    return out;
  }
  const double rate = std::max(m.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
  const double dt0 = std::min(t_grid[1] - t_grid[0], 0.01 / rate);
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                         odeint::runge_kutta_fehlberg78<state>());
  odeint::integrate_times(stepper, rhs, x, t_grid.begin(), t_grid.end(),
                          dt0 > 0.0 ? dt0 : 0.01 / rate, observer,
                          odeint::max_step_checker(100000));
  return out;
}

std::vector<double> uniform_grid(double t_max, std::size_t samples) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidParameter("t_max", "must be > 0");
  if (samples < 2) throw InvalidParameter("samples", "must be >= 2");
  std::vector<double> grid(samples);
  const double dt = t_max / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) grid[i] = dt * static_cast<double>(i);
  grid.back() = t_max;
  return grid;
}

}  // namespace entlaser
