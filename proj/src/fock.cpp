#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "entlaser/oracle.hpp"

namespace entlaser {

namespace {

void check_field_truncation(int n_max) {
  if (n_max < 2) throw TruncationTooSmall("n_max must be >= 2, got " + std::to_string(n_max));
  if (n_max > kMaxStateTruncation) {
    throw InvalidParameter("n_max", "field states are limited to n_max <= " +
                                        std::to_string(kMaxStateTruncation));
  }
}

// Truncated single-mode coherent amplitudes <n|beta>, n = 0..n_max.
Eigen::VectorXcd coherent_amplitudes(cplx beta, int n_max) {
  Eigen::VectorXcd v(n_max + 1);
  v(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * beta / std::sqrt(double(n));
  return v;
}

}  // namespace

FockDensity fock_pure(const Eigen::VectorXcd& psi, int n_max) {
  check_field_truncation(n_max);
  const Eigen::Index d = n_max + 1;
  if (psi.size() != d * d) throw InvalidParameter("psi", "size must be (n_max+1)^2");
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidParameter("psi", "must be nonzero");
  const Eigen::VectorXcd u = psi / norm;
  return FockDensity{n_max, Frame::RotatingField, u * u.adjoint()};
}

FockDensity fock_number_state(int n1, int n2, int n_max) {
  check_field_truncation(n_max);
  if (n1 < 0 || n1 > n_max) throw InvalidParameter("n1", "outside 0..n_max");
  if (n2 < 0 || n2 > n_max) throw InvalidParameter("n2", "outside 0..n_max");
  const int d = n_max + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  psi(n1 * d + n2) = 1.0;
  return fock_pure(psi, n_max);
}

FockDensity fock_vacuum(int n_max) { return fock_number_state(0, 0, n_max); }

FockDensity fock_coherent(cplx beta1, cplx beta2, int n_max) {
  check_field_truncation(n_max);
  if (!std::isfinite(std::abs(beta1)) || !std::isfinite(std::abs(beta2))) {
    throw InvalidParameter("beta", "coherent amplitudes must be finite");
  }
  const Eigen::VectorXcd v1 = coherent_amplitudes(beta1, n_max);
  const Eigen::VectorXcd v2 = coherent_amplitudes(beta2, n_max);
  const int d = n_max + 1;
  Eigen::VectorXcd psi(d * d);
  for (int p = 0; p < d; ++p) psi.segment(p * d, d) = v1(p) * v2;
  return fock_pure(psi, n_max);
}

FockDensity fock_two_mode_squeezed(double r, int n_max) {
  check_field_truncation(n_max);
  if (!std::isfinite(r)) throw InvalidParameter("r", "must be finite");
  const int d = n_max + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  const double t = -std::tanh(r);
  double c = 1.0 / std::cosh(r);
  for (int n = 0; n < d; ++n, c *= t) psi(n * d + n) = c;
  return fock_pure(psi, n_max);
}

FockDensity atom_field_product(const Eigen::Matrix4cd& atom, const FockDensity& field) {
  if (field.frame != Frame::RotatingField) {
    throw InvalidParameter("field", "must be a field-only density matrix");
  }
  if (field.n_max > kMaxMicroTruncation) {
    throw InvalidParameter("n_max", "atom-field representation is limited to n_max <= " +
                                        std::to_string(kMaxMicroTruncation));
  }
  const Eigen::Index f = field.dim();
  FockDensity out{field.n_max, Frame::RotatingAtomField, Eigen::MatrixXcd(4 * f, 4 * f)};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.data.block(i * f, j * f, f, f) = atom(i, j) * field.data;
  }
  return out;
}

MomentState extract_moments(const FockDensity& rho) {
  const int d = rho.modes_dim();
  const int n = rho.n_max;
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  const auto& r = rho.data;
  MomentState s;
  cplx b1{}, b2{}, m{};
  double n1 = 0.0, n2 = 0.0;
  // <X> = Tr(X rho) = sum_{i,k} X(i,k) rho(k,i)
  for (int atom = 0; atom < rho.atom_dim(); ++atom) {
    const Eigen::Index off = atom * block;
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        const Eigen::Index i = off + p * d + q;
        const double pop = r(i, i).real();
        n1 += p * pop;
        n2 += q * pop;
        if (p < n) b1 += std::sqrt(double(p + 1)) * r(i + d, i);
        if (q < n) b2 += std::sqrt(double(q + 1)) * r(i + 1, i);
        if (p < n && q < n) m += std::sqrt(double(p + 1) * (q + 1)) * r(i + d + 1, i);
      }
    }
  }
  s.b1 = b1;
  s.b2 = b2;
  s.n1 = n1;
  s.n2 = n2;
  s.m = m;
  return s;
}

double leakage(const FockDensity& rho) {
  const int d = rho.modes_dim();
  const int n = rho.n_max;
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  double edge = 0.0;
  for (int atom = 0; atom < rho.atom_dim(); ++atom) {
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        if (p != n && q != n) continue;
        const Eigen::Index i = atom * block + p * d + q;
        edge += rho.data(i, i).real();
      }
    }
  }
  return edge;
}

Eigen::Matrix4cd reduced_atomic_state(const FockDensity& rho) {
  if (rho.frame != Frame::RotatingAtomField) {
    throw InvalidParameter("rho", "has no atomic factor");
  }
  const Eigen::Index f = rho.dim() / 4;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = rho.data.block(i * f, j * f, f, f).trace();
  }
  return a;
}

double hermiticity_error(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double Generator::norm_estimate(int iterations) const {
  const Eigen::Index n = dim();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd x(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = cplx(gauss(rng), gauss(rng));
  }
  x = 0.5 * (x + x.adjoint()).eval();
  x /= x.norm();
  Eigen::MatrixXcd y(n, n);
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    apply(x, y);
    const double growth = y.norm();
    best = std::max(best, growth);
    if (!(growth > 0.0)) break;
    x = y / growth;
  }
  return best;
}

LeakageExceeded::LeakageExceeded(FockRun partial, double last_valid_time)
    : Error("truncation leakage exceeded the limit after t = " + std::to_string(last_valid_time)),
      partial_(std::move(partial)),
      last_valid_time_(last_valid_time) {}

namespace {

struct Rk4Workspace {
  Eigen::MatrixXcd k1, k2, k3, k4, tmp;
  explicit Rk4Workspace(Eigen::Index n)
      : k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n) {}
};

void rk4_step(const Generator& gen, Eigen::MatrixXcd& rho, double dt, Rk4Workspace& w) {
  gen.apply(rho, w.k1);
  w.tmp = rho + (0.5 * dt) * w.k1;
  gen.apply(w.tmp, w.k2);
  w.tmp = rho + (0.5 * dt) * w.k2;
  gen.apply(w.tmp, w.k3);
  w.tmp = rho + dt * w.k3;
  gen.apply(w.tmp, w.k4);
  rho += (dt / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

FockSample sample_of(double t, const FockDensity& rho) {
  FockSample s;
  s.t = t;
  s.moments = extract_moments(rho);
  s.trace = rho.data.trace().real();
  s.hermiticity = hermiticity_error(rho.data);
  s.leakage = leakage(rho);
  return s;
}

}  // namespace

FockRun evolve_fock(const Generator& gen, const FockDensity& rho0, std::span<const double> t_grid,
                    const FockEvolveOptions& opts) {
  if (rho0.dim() != gen.dim() || rho0.frame != gen.frame() || rho0.n_max != gen.n_max()) {
    throw InvalidParameter("rho0", "does not match the generator's space");
  }
  if (t_grid.empty()) throw InvalidParameter("t_grid", "must not be empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw InvalidParameter("t_grid", "must be ascending");
  }

  FockRun run;
  run.norm_estimate = gen.norm_estimate();
  double dt_max = run.norm_estimate > 0.0 ? opts.norm_step / run.norm_estimate
                                          : std::numeric_limits<double>::infinity();

  FockDensity rho = rho0;
  Rk4Workspace work(gen.dim());
  auto accept = [&](double t) {
    FockSample s = sample_of(t, rho);
    if (!(s.leakage < opts.leakage_limit)) {
      const double last = run.samples.empty() ? t : run.samples.back().t;
      throw LeakageExceeded(std::move(run), last);
    }
    run.samples.push_back(s);
    if (opts.on_sample) opts.on_sample(t, rho);
  };

  accept(t_grid[0]);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    if (span == 0.0) {
      accept(t_grid[k]);
      continue;
    }
    const Eigen::MatrixXcd start = rho.data;
    const FockSample& prev = run.samples.back();
    for (int attempt = 0;; ++attempt) {
      const auto steps = static_cast<long>(std::ceil(span / dt_max - 1e-12));
      const double dt = span / static_cast<double>(std::max(steps, 1L));
      rho.data = start;
      for (long s = 0; s < std::max(steps, 1L); ++s) rk4_step(gen, rho.data, dt, work);
      run.dt = dt;

      const double herm_drift = std::max(0.0, hermiticity_error(rho.data) - prev.hermiticity);
      double drift = herm_drift / span;
      if (gen.lindblad_form()) {
        drift = std::max(drift, std::abs(rho.data.trace().real() - prev.trace) / span);
      }
      if (drift <= opts.drift_per_time || attempt >= opts.max_halvings) break;
      dt_max = dt / 2.0;
      ++run.halvings;
    }
    accept(t_grid[k]);
  }
  return run;
}

}  // namespace entlaser
