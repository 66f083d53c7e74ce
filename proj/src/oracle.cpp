#include <cmath>
#include <string>
#include <vector>

#include "entlaser/oracle.hpp"

namespace entlaser {

namespace {

void check_truncation(int n_max, int limit) {
  if (n_max < 2) throw TruncationTooSmall("n_max must be >= 2, got " + std::to_string(n_max));
  if (n_max > limit) {
    throw InvalidParameter("n_max", "dense representation is limited to n_max <= " +
                                        std::to_string(limit));
  }
}

Eigen::Matrix4cd ket_bra(int i, int j) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(i, j) = 1.0;
  return m;
}

struct AtomicJump {
  int to, from;
  double rate;
};

std::array<AtomicJump, 4> atomic_jumps(const PhysicalParams& p) {
  return {{{kLevelD, kLevelA, p.gamma1},
           {kLevelC, kLevelA, p.gamma2},
           {kLevelC, kLevelB, p.gamma3},
           {kLevelD, kLevelB, p.gamma4}}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Field generator

namespace {

// sqrt of the photon number reached by shifting x by dx in the ladder
// action; zero where the shift leaves 0..n.
double ladder(int x, int dx, int n) {
  if (dx == 0) return 1.0;
  if (dx > 0) return x < n ? std::sqrt(double(x + 1)) : 0.0;
  return std::sqrt(double(x));
}

}  // namespace

FieldGenerator::FieldGenerator(const CoefficientSet& c, double kappa1, double kappa2, int n_max)
    : n_max_(n_max), d_(n_max + 1) {
  check_truncation(n_max, kMaxFieldTruncation);
  const int d = d_, n = n_max_;
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;

  // L rho = K rho + rho K^dag + sum of sandwich terms. The number-like
  // products use truncated operators, so a a^dag vanishes at the edge
  // exactly as the matching sandwich term does.
  const auto trunc_aad = [n](int p) { return p < n ? double(p + 1) : 0.0; };
  kdiag_.resize(dim);
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      kdiag_(p * d + q) = -(c.alpha11 + kappa1) * double(p) + std::conj(c.beta11) * trunc_aad(p) -
                          (c.alpha22 + kappa2) * double(q) + std::conj(c.beta22) * trunc_aad(q);
    }
  }
  const cplx k_up = -(c.alpha12 + c.alpha21);                   // on a1^dag a2^dag
  const cplx k_down = std::conj(c.beta12) + std::conj(c.beta21);  // on a1 a2

  struct Spec {
    cplx coef;
    int dp, dq, dr, ds;
  };
  const Spec specs[] = {
      {k_up, -1, -1, 0, 0},                  // K rho
      {k_down, +1, +1, 0, 0},
      {std::conj(k_up), 0, 0, -1, -1},       // rho K^dag
      {std::conj(k_down), 0, 0, +1, +1},
      {2.0 * kappa1 + 2.0 * c.alpha11.real(), +1, 0, +1, 0},     // a1 rho a1^dag
      {std::conj(c.alpha12) - std::conj(c.beta21), +1, 0, 0, -1},  // a1 rho a2
      {-2.0 * c.beta11.real(), -1, 0, -1, 0},                      // a1^dag rho a1
      {c.alpha21 - c.beta12, -1, 0, 0, +1},                        // a1^dag rho a2^dag
      {2.0 * kappa2 + 2.0 * c.alpha22.real(), 0, +1, 0, +1},     // a2 rho a2^dag
      {std::conj(c.alpha21) - std::conj(c.beta12), 0, +1, -1, 0},  // a2 rho a1
      {-2.0 * c.beta22.real(), 0, -1, 0, -1},                      // a2^dag rho a2
      {c.alpha12 - c.beta21, 0, -1, +1, 0},                        // a2^dag rho a1^dag
  };
  for (const Spec& sp : specs) {
    if (sp.coef == 0.0) continue;
    Term t{Eigen::ArrayXcd(dim), sp.dp, sp.dq, sp.dr, sp.ds};
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        t.row(p * d + q) = sp.coef * ladder(p, sp.dp, n) * ladder(q, sp.dq, n);
      }
    }
    terms_.push_back(std::move(t));
  }
}

void FieldGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  const int d = d_, n = n_max_;
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  out.resize(dim, dim);
  // Column (rr, s) of the output collects row-shifted copies of neighbouring
  // source columns. Row weights vanish wherever a flat shift would wrap
  // between mode-2 blocks. Plain loops on interleaved doubles vectorise far
  // better here than Eigen's mixed-scalar segment expressions.
  const double* kd = reinterpret_cast<const double*>(kdiag_.data());
  for (int rr = 0; rr < d; ++rr) {
    for (int s = 0; s < d; ++s) {
      const Eigen::Index j = rr * d + s;
      double* o = reinterpret_cast<double*>(out.col(j).data());
      const double* src = reinterpret_cast<const double*>(rho.col(j).data());
      const double cr = kd[2 * j], ci = -kd[2 * j + 1];
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double wr = kd[2 * i] + cr, wi = kd[2 * i + 1] + ci;
        const double xr = src[2 * i], xi = src[2 * i + 1];
        o[2 * i] = wr * xr - wi * xi;
        o[2 * i + 1] = wr * xi + wi * xr;
      }
      for (const Term& t : terms_) {
        const double cw = ladder(rr, t.dr, n) * ladder(s, t.ds, n);
        if (cw == 0.0) continue;
        const double* x = reinterpret_cast<const double*>(rho.col(j + t.dr * d + t.ds).data());
        const double* w = reinterpret_cast<const double*>(t.row.data());
        const Eigen::Index shift = t.dp * d + t.dq;
        const Eigen::Index len = dim - std::abs(shift);
        const Eigen::Index o0 = shift >= 0 ? 0 : -shift;
        const Eigen::Index x0 = shift >= 0 ? shift : 0;
        double* oo = o + 2 * o0;
        const double* ww = w + 2 * o0;
        const double* xx = x + 2 * x0;
        for (Eigen::Index i = 0; i < len; ++i) {
          const double wr = ww[2 * i], wi = ww[2 * i + 1];
          const double xr = xx[2 * i], xi = xx[2 * i + 1];
          oo[2 * i] += cw * (wr * xr - wi * xi);
          oo[2 * i + 1] += cw * (wr * xi + wi * xr);
        }
      }
    }
  }
}

FieldGenerator build_field_generator(const CoefficientSet& coeffs, double kappa1, double kappa2,
                                     int n_max) {
  if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0)) {
    throw InvalidParameter(kappa1 >= 0.0 ? "kappa2" : "kappa1", "must be >= 0");
  }
  return FieldGenerator(coeffs, kappa1, kappa2, n_max);
}

// ---------------------------------------------------------------------------
// Microscopic generator

MicroGenerator::MicroGenerator(const PhysicalParams& params, int n_max) : n_max_(n_max) {
  validate(params);
  check_truncation(n_max, kMaxMicroTruncation);
  const int d = n_max + 1;
  dim_ = 4 * static_cast<Eigen::Index>(d) * d;
  auto idx = [d](int atom, int p, int q) {
    return static_cast<Eigen::Index>((atom * d + p) * d + q);
  };
  using Triplet = Eigen::Triplet<cplx>;

  std::vector<Triplet> h;
  const Eigen::Matrix4cd h0 = atomic_hamiltonian(params);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (h0(a, b) == 0.0) continue;
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) h.emplace_back(idx(a, p, q), idx(b, p, q), h0(a, b));
      }
    }
  }
  // g1 (|a><c| a1 + h.c.) + g2 (|b><d| a2 + h.c.)
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      if (p < n_max) {
        const double w = params.g1 * std::sqrt(double(p + 1));
        h.emplace_back(idx(kLevelA, p, q), idx(kLevelC, p + 1, q), w);
        h.emplace_back(idx(kLevelC, p + 1, q), idx(kLevelA, p, q), w);
      }
      if (q < n_max) {
        const double w = params.g2 * std::sqrt(double(q + 1));
        h.emplace_back(idx(kLevelB, p, q), idx(kLevelD, p, q + 1), w);
        h.emplace_back(idx(kLevelD, p, q + 1), idx(kLevelB, p, q), w);
      }
    }
  }
  Sparse ham(dim_, dim_);
  ham.setFromTriplets(h.begin(), h.end());

  std::vector<Sparse> jumps;
  for (const AtomicJump& j : atomic_jumps(params)) {
    if (j.rate == 0.0) continue;
    std::vector<Triplet> t;
    const double w = std::sqrt(j.rate);
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) t.emplace_back(idx(j.to, p, q), idx(j.from, p, q), w);
    }
    Sparse s(dim_, dim_);
    s.setFromTriplets(t.begin(), t.end());
    jumps.push_back(std::move(s));
  }
  // Cavity damping -kappa (a^dag a rho + rho a^dag a - 2 a rho a^dag) is the
  // Lindblad dissipator of sqrt(2 kappa) a.
  for (int mode = 0; mode < 2; ++mode) {
    const double kappa = mode == 0 ? params.kappa1 : params.kappa2;
    if (kappa == 0.0) continue;
    std::vector<Triplet> t;
    for (int a = 0; a < 4; ++a) {
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
          const int k = mode == 0 ? p : q;
          if (k == n_max) continue;
          const double w = std::sqrt(2.0 * kappa * (k + 1));
          t.emplace_back(idx(a, p, q), mode == 0 ? idx(a, p + 1, q) : idx(a, p, q + 1), w);
        }
      }
    }
    Sparse s(dim_, dim_);
    s.setFromTriplets(t.begin(), t.end());
    jumps.push_back(std::move(s));
  }

  Sparse k = cplx(0.0, -1.0) * ham;
  for (const Sparse& j : jumps) {
    const Sparse jdj = Sparse(j.adjoint()) * j;
    k -= 0.5 * jdj;
  }
  k_ = k;
  k_.makeCompressed();
  k_adj_ = k_.adjoint();
  for (const Sparse& j : jumps) {
    jumps_adj_.emplace_back(j.adjoint());
    jumps_.push_back(j);
  }
}

void MicroGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  out.noalias() = k_ * rho;
  out.noalias() += rho * k_adj_;
  Eigen::MatrixXcd tmp(dim_, dim_);
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    tmp.noalias() = jumps_[i] * rho;
    out.noalias() += tmp * jumps_adj_[i];
  }
}

MicroGenerator build_micro_generator(const PhysicalParams& params, int n_max) {
  return MicroGenerator(params, n_max);
}

// ---------------------------------------------------------------------------
// Atomic steady state

Eigen::Matrix4cd atomic_hamiltonian(const PhysicalParams& params) {
  const cplx w3 = params.omega3(), w4 = params.omega4();
  Eigen::Matrix4cd h = -params.delta_a * ket_bra(kLevelA, kLevelA) -
                       params.delta_b * ket_bra(kLevelB, kLevelB);
  h -= w3 * ket_bra(kLevelA, kLevelD) + std::conj(w3) * ket_bra(kLevelD, kLevelA);
  h -= w4 * ket_bra(kLevelB, kLevelC) + std::conj(w4) * ket_bra(kLevelC, kLevelB);
  return h;
}

Eigen::Matrix<cplx, 16, 16> atomic_generator_matrix(const PhysicalParams& params) {
  using Super = Eigen::Matrix<cplx, 16, 16>;
  // vec(A rho B) = (B^T kron A) vec(rho)
  auto kron = [](const Eigen::Matrix4cd& b_t, const Eigen::Matrix4cd& a) {
    Super s;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) s.block<4, 4>(4 * i, 4 * j) = b_t(i, j) * a;
    }
    return s;
  };
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  const Eigen::Matrix4cd h = atomic_hamiltonian(params);
  const cplx i(0.0, 1.0);
  Super l = -i * (kron(id, h) - kron(h.transpose(), id));
  for (const AtomicJump& j : atomic_jumps(params)) {
    const Eigen::Matrix4cd s = ket_bra(j.to, j.from);
    const Eigen::Matrix4cd sds = s.adjoint() * s;
    l += j.rate * (kron(s.conjugate(), s) - 0.5 * kron(id, sds) - 0.5 * kron(sds.transpose(), id));
  }
  return l;
}

Eigen::Matrix4cd atomic_steady_state(const PhysicalParams& params) {
  validate(params);
  using Super = Eigen::Matrix<cplx, 16, 16>;
  const Super l = atomic_generator_matrix(params);

  const Eigen::JacobiSVD<Super> svd(l);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(sv(0), 1e-300);
  int nullity = 0;
  for (int k = 0; k < 16; ++k) nullity += sv(k) <= tol ? 1 : 0;
  if (nullity != 1) {
    throw DegenerateSteadyState("atomic generator null space has dimension " +
                                std::to_string(nullity));
  }

  // Trace preservation makes the diagonal rows linearly dependent; replace
  // the rho(a, a) row by the trace constraint.
  Super a = l;
  Eigen::Matrix<cplx, 16, 1> rhs = Eigen::Matrix<cplx, 16, 1>::Zero();
  a.row(0).setZero();
  for (int k = 0; k < 4; ++k) a(0, k + 4 * k) = 1.0;
  rhs(0) = 1.0;
  const Eigen::Matrix<cplx, 16, 1> v = a.fullPivLu().solve(rhs);

  Eigen::Matrix4cd rho;
  for (int col = 0; col < 4; ++col) {
    for (int row = 0; row < 4; ++row) rho(row, col) = v(row + 4 * col);
  }
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace entlaser
