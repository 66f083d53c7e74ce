#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <utility>
#include <vector>

#include "entlaser/coefficients.hpp"

namespace entlaser {

/// Field moments in the frame co-rotating with the cavity modes.
/// <b1^dag b2^dag> is never stored: it is always conj(m).
struct MomentState {
  cplx b1{};       ///< <b1>
  cplx b2{};       ///< <b2>
  double n1 = 0.0;  ///< <b1^dag b1>
  double n2 = 0.0;  ///< <b2^dag b2>
  cplx m{};        ///< <b1 b2>
};

/// R = (<b1^dag b1>, <b2^dag b2>, <b1 b2>, <b1^dag b2^dag>).
using SecondMomentVector = Eigen::Vector4cd;

SecondMomentVector second_moment_vector(const MomentState& s);

/// Writes the second-moment part of `r` into `s`; the third and fourth
/// components are averaged as m = (R3 + conj R4) / 2.
void assign_second_moments(MomentState& s, const SecondMomentVector& r);

/// Drift of (<b1>, <b2^dag>): d/dt x = A x with A = -[[c11+k1, c12], [c21*, c22*+k2]].
Eigen::Matrix2cd first_moment_drift(const CoefficientSet& c);

/// Closed-form (<b1>(t), <b2>(t)) from the hyperbolic solution of the 2x2 system.
std::pair<cplx, cplx> first_moment_solution(const CoefficientSet& c, const MomentState& init,
                                            double t);

/// dR/dt = M R + I.
struct SecondMomentSystem {
  Eigen::Matrix4cd m_matrix;
  Eigen::Vector4cd i_vector;
};

SecondMomentSystem build_second_moment_system(const CoefficientSet& c, double kappa1,
                                              double kappa2);
inline SecondMomentSystem build_second_moment_system(const CoefficientSet& c) {
  return build_second_moment_system(c, c.kappa1, c.kappa2);
}

/// Coefficients (leading first) of det(s - M) = s^4 + q1 s^3 + q2 s^2 + q3 s + q4,
/// written out in terms of the c_ij and d-terms recovered from M.
std::array<cplx, 5> characteristic_quartic(const SecondMomentSystem& sys);

inline constexpr double kDegeneracyGap = 1e-6;
inline constexpr double kMaxEigenbasisCondition = 1e8;

/// Residue-form solution R(t) = sum_k (h_k + p_k) exp(lambda_k t) + c.
///
/// h_k is the residue of (s - M)^-1 R0 at lambda_k, p_k that of
/// (s - M)^-1 I / s, and c = -M^-1 I the residue at s = 0. Obtained from an
/// eigendecomposition of M. Immutable once built.
class SpectralSolution {
 public:
  /// Throws SpectralDegenerate when the eigenbasis is too ill-conditioned to
  /// represent exp(M t), or when M is near-singular while I != 0.
  SpectralSolution(const SecondMomentSystem& sys, const SecondMomentVector& r0,
                   double degeneracy_gap = kDegeneracyGap);

  SecondMomentVector evaluate(double t) const;

  const Eigen::Vector4cd& eigenvalues() const { return eigenvalues_; }
  /// Column k is the weight of exp(lambda_k t).
  const Eigen::Matrix4cd& homogeneous_weights() const { return homogeneous_; }
  const Eigen::Matrix4cd& particular_weights() const { return particular_; }
  const Eigen::Vector4cd& constant_term() const { return constant_; }

  /// Two eigenvalues lie closer than degeneracy_gap * max|lambda|.
  bool near_degenerate() const { return near_degenerate_; }
  double eigenbasis_condition() const { return condition_; }

 private:
  Eigen::Vector4cd eigenvalues_;
  Eigen::Matrix4cd homogeneous_;
  Eigen::Matrix4cd particular_;
  Eigen::Vector4cd constant_;
  bool near_degenerate_ = false;
  double condition_ = 1.0;
};

enum class SolverMethod { Spectral, Numeric };

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

/// Evaluates R on an ascending grid starting at 0. Spectral may throw
/// SpectralDegenerate; the caller then falls back to Numeric.
std::vector<SecondMomentVector> evolve_second_moments(const SecondMomentSystem& sys,
                                                      const SecondMomentVector& r0,
                                                      std::span<const double> t_grid,
                                                      SolverMethod method,
                                                      const IntegratorOptions& opts = {});

inline constexpr double kTolPhysicality = 1e-8;

/// `samples` uniformly spaced points over [0, t_max], both ends included.
std::vector<double> uniform_grid(double t_max, std::size_t samples);

}  // namespace entlaser
