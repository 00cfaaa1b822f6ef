#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Exact finite-dimensional representation of collective spins: Dicke-basis
// operators, states, rotations and unitary evolution for one or two modes.
//
// Conventions (fixed once, checked against N=1 by hand in the tests):
//   - basis is the Z eigenbasis with m ascending, m = -j..j, j = N/2
//   - rotations and evolution use exp(-i*theta*G) for generator G
//   - conjugation identity: exp(i*theta*Z) X exp(-i*theta*Z) = X cos(theta) - Y sin(theta)

namespace spincav {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// One symmetric ensemble of two-level atoms, dimension N+1.
struct SpinSystem {
  int atom_count = 0;

  double spin() const { return 0.5 * atom_count; }
  int dimension() const { return atom_count + 1; }

  friend bool operator==(const SpinSystem&, const SpinSystem&) = default;
};

/// A single mode or an ordered tensor product of modes.
class SpinSpace {
 public:
  SpinSpace() = default;
  explicit SpinSpace(SpinSystem single);
  SpinSpace(SpinSystem first, SpinSystem second);
  explicit SpinSpace(std::vector<SpinSystem> modes);

  int mode_count() const { return static_cast<int>(modes_.size()); }
  const SpinSystem& mode(int index) const;
  int dimension() const { return dimension_; }

  friend bool operator==(const SpinSpace&, const SpinSpace&) = default;

 private:
  std::vector<SpinSystem> modes_;
  int dimension_ = 0;
};

/// Dense operator on a SpinSpace. When `hermitian` is set the matrix is
/// required to equal its adjoint within 1e-12 relative max-norm.
struct SpinOperator {
  SpinSpace space;
  Matrix matrix;
  bool hermitian = false;

  SpinOperator() = default;
  SpinOperator(SpinSpace sp, Matrix m, bool herm = true);
};

/// Normalized state vector on a SpinSpace.
struct SpinState {
  SpinSpace space;
  Vector amplitudes;

  SpinState() = default;
  SpinState(SpinSpace sp, Vector v);
  double norm() const { return amplitudes.norm(); }
};

struct CollectiveOps {
  SpinSystem system;
  SpinOperator x, y, z;
};

/// X, Y, Z with [X,Y] = iZ (cyclic); Z diagonal with eigenvalues -j..j.
CollectiveOps build_collective_ops(const SpinSystem& system);

/// Max-norm of X^2+Y^2+Z^2 - j(j+1) I.
double casimir_deviation(const CollectiveOps& ops);

/// exp(-i Z phi) exp(-i Y theta) |m=-j>.  theta=pi/2, phi=0 is the equatorial
/// state with <X> = -j.
SpinState coherent_state(const SpinSystem& system, double polar, double azimuth);

/// exp(-i theta (n.J)) |psi>. The axis is normalized; a zero axis is rejected.
SpinState rotate(const SpinState& state, const Eigen::Vector3d& axis, double angle);

struct EvolveOptions {
  enum class Backend { automatic, dense, krylov };
  Backend backend = Backend::automatic;
  double krylov_tolerance = 1e-12;
  int krylov_dimension = 40;
};

/// Threshold between dense eigendecomposition and the Lanczos propagator.
inline constexpr int kDenseEvolveLimit = 4096;

/// exp(-i H t) |psi>. H must carry the hermitian flag.
SpinState evolve(const SpinState& state, const SpinOperator& hamiltonian, double t,
                 const EvolveOptions& options = {});

/// Eigendecomposition of a Hermitian generator, reusable across many times.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const SpinOperator& hamiltonian);

  SpinState apply(const SpinState& state, double t) const;
  Matrix unitary(double t) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  SpinSpace space_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

/// op (x) I or I (x) op on a two-mode space; mode_index is 0 or 1.
SpinOperator embed(const SpinOperator& op, int mode_index, const SpinSpace& pair);

/// |<psi1|psi2>|^2.
double overlap(const SpinState& psi1, const SpinState& psi2);

struct Moments {
  double mean = 0;
  double variance = 0;
};

/// Mean and variance of a Hermitian operator; the variance is computed as
/// ||(A - <A>)psi||^2 so it cannot go negative.
Moments moments(const SpinState& state, const SpinOperator& op);

/// Quasi-CV pair: q = sqrt(2/N) Z, p = sqrt(2/N) X, with [q,p] = i (2/N) Y.
SpinOperator quasi_position(const CollectiveOps& ops);
SpinOperator quasi_momentum(const CollectiveOps& ops);

}  // namespace spincav
