#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <span>
#include <vector>

#include "entlaser/coefficients.hpp"
#include "entlaser/dynamics.hpp"
#include "entlaser/errors.hpp"

namespace entlaser {

/// Which degrees of freedom the density matrix spans. Both frames co-rotate
/// with the cavity modes, so field operators are the b_k.
enum class Frame { RotatingField, RotatingAtomField };

inline constexpr int kMaxFieldTruncation = 32;
inline constexpr int kMaxMicroTruncation = 12;
/// States are only built and measured, never propagated, above the field limit.
inline constexpr int kMaxStateTruncation = 48;

/// Atomic levels are ordered |a>, |b>, |c>, |d>.
enum AtomLevel : int { kLevelA = 0, kLevelB = 1, kLevelC = 2, kLevelD = 3 };

/// Dense density matrix on the truncated product basis
/// [atom (x)] mode1 (x) mode2, each mode holding 0..n_max photons.
/// Basis index: (atom * (n_max+1) + n1) * (n_max+1) + n2.
struct FockDensity {
  int n_max = 0;
  Frame frame = Frame::RotatingField;
  Eigen::MatrixXcd data;

  int modes_dim() const { return n_max + 1; }
  int atom_dim() const { return frame == Frame::RotatingAtomField ? 4 : 1; }
  Eigen::Index dim() const { return data.rows(); }
};

FockDensity fock_vacuum(int n_max);
FockDensity fock_number_state(int n1, int n2, int n_max);
/// Truncated product coherent state, renormalised after truncation.
FockDensity fock_coherent(cplx beta1, cplx beta2, int n_max);
/// Truncated two-mode squeezed vacuum sum_n (-tanh r)^n / cosh r |n, n>, renormalised.
FockDensity fock_two_mode_squeezed(double r, int n_max);
/// Field pure state from amplitudes indexed n1 * (n_max+1) + n2.
FockDensity fock_pure(const Eigen::VectorXcd& psi, int n_max);
/// atom (x) field.
FockDensity atom_field_product(const Eigen::Matrix4cd& atom, const FockDensity& field);

MomentState extract_moments(const FockDensity& rho);
/// Population in basis states with n1 = n_max or n2 = n_max.
double leakage(const FockDensity& rho);
Eigen::Matrix4cd reduced_atomic_state(const FockDensity& rho);
double hermiticity_error(const Eigen::MatrixXcd& m);

/// Linear generator acting on density matrices, applied without forming a
/// superoperator matrix. Immutable after construction.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const = 0;
  virtual int n_max() const = 0;
  virtual Frame frame() const = 0;
  virtual Eigen::Index dim() const = 0;
  /// True for generators written in Lindblad form.
  virtual bool lindblad_form() const = 0;

  /// Power-iteration estimate of the largest |eigenvalue|.
  double norm_estimate(int iterations = 40) const;
};

/// Effective two-mode field master equation in the co-rotating frame: the
/// three coefficient blocks plus cavity damping.
class FieldGenerator final : public Generator {
 public:
  FieldGenerator(const CoefficientSet& coeffs, double kappa1, double kappa2, int n_max);

  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const override;
  int n_max() const override { return n_max_; }
  Frame frame() const override { return Frame::RotatingField; }
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(d_) * d_; }
  bool lindblad_form() const override { return false; }

 private:
  // One term of the action: coefficient-weighted row operator (shift dp, dq
  // on the mode-1/mode-2 photon numbers of the row index) times a column
  // operator (shift dr, ds). Weights are sqrt(raised photon number).
  struct Term {
    Eigen::ArrayXcd row;
    int dp, dq, dr, ds;
  };
  int n_max_;
  int d_;
  Eigen::ArrayXcd kdiag_;  // diagonal of the left-acting operator K
  std::vector<Term> terms_;
};

/// Atom (x) two-mode field in the frame where the atom-laser-cavity
/// Hamiltonian is time independent; Lindblad form with atomic decay and
/// cavity damping.
class MicroGenerator final : public Generator {
 public:
  MicroGenerator(const PhysicalParams& params, int n_max);

  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const override;
  int n_max() const override { return n_max_; }
  Frame frame() const override { return Frame::RotatingAtomField; }
  Eigen::Index dim() const override { return dim_; }
  bool lindblad_form() const override { return true; }

 private:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  int n_max_;
  Eigen::Index dim_;
  Sparse k_;       // -iH - 1/2 sum J^dag J
  Sparse k_adj_;
  std::vector<Sparse> jumps_;
  std::vector<Sparse> jumps_adj_;
};

/// Throws TruncationTooSmall for n_max < 2 and InvalidParameter above the
/// dense-representation limit.
FieldGenerator build_field_generator(const CoefficientSet& coeffs, double kappa1, double kappa2,
                                     int n_max);
MicroGenerator build_micro_generator(const PhysicalParams& params, int n_max);

/// Zeroth-order atomic Hamiltonian (drives and detunings only).
Eigen::Matrix4cd atomic_hamiltonian(const PhysicalParams& params);
/// 16x16 matrix of the zeroth-order atomic generator acting on
/// column-stacked vec(rho), index i + 4 j for rho(i, j).
Eigen::Matrix<cplx, 16, 16> atomic_generator_matrix(const PhysicalParams& params);

/// Unique unit-trace null vector of the zeroth-order atomic generator.
/// Throws DegenerateSteadyState if the null space is not one-dimensional.
Eigen::Matrix4cd atomic_steady_state(const PhysicalParams& params);

struct FockSample {
  double t = 0.0;
  MomentState moments;
  double trace = 1.0;
  double hermiticity = 0.0;
  double leakage = 0.0;
};

struct FockRun {
  std::vector<FockSample> samples;
  double dt = 0.0;        ///< final step size
  int halvings = 0;       ///< step halvings triggered by drift control
  double norm_estimate = 0.0;
};

struct FockEvolveOptions {
  double leakage_limit = 1e-6;
  double norm_step = 0.1;       ///< ||L|| dt bound
  double drift_per_time = 1e-9;
  int max_halvings = 8;
  /// Called with the state at every accepted grid point.
  std::function<void(double, const FockDensity&)> on_sample;
};

/// Raised when the truncation edge population passes the leakage limit;
/// `partial()` holds every valid sample up to that point.
class LeakageExceeded : public Error {
 public:
  LeakageExceeded(FockRun partial, double last_valid_time);
  const FockRun& partial() const { return partial_; }
  double last_valid_time() const { return last_valid_time_; }

 private:
  FockRun partial_;
  double last_valid_time_;
};

/// Fixed-step classical RK4 between grid points; dt starts at
/// norm_step / ||L|| and is halved while the trace or Hermiticity drift per
/// unit time exceeds drift_per_time. Trace drift only steers Lindblad-form
/// generators; for the others it is reported.
FockRun evolve_fock(const Generator& gen, const FockDensity& rho0, std::span<const double> t_grid,
                    const FockEvolveOptions& opts = {});

}  // namespace entlaser
