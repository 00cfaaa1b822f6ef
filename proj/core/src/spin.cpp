#include "spincav/spin.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace spincav {

namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

SpinSpace::SpinSpace(SpinSystem single) : SpinSpace(std::vector<SpinSystem>{single}) {}

SpinSpace::SpinSpace(SpinSystem first, SpinSystem second)
    : SpinSpace(std::vector<SpinSystem>{first, second}) {}

SpinSpace::SpinSpace(std::vector<SpinSystem> modes) : modes_(std::move(modes)) {
  require(!modes_.empty(), "SpinSpace needs at least one mode");
  dimension_ = 1;
  for (const auto& m : modes_) {
    require(m.atom_count >= 1, "atom count must be a positive integer");
    dimension_ *= m.dimension();
  }
}

const SpinSystem& SpinSpace::mode(int index) const {
  require(index >= 0 && index < mode_count(), "mode index out of range");
  return modes_[static_cast<size_t>(index)];
}

SpinOperator::SpinOperator(SpinSpace sp, Matrix m, bool herm)
    : space(std::move(sp)), matrix(std::move(m)), hermitian(herm) {
  require(matrix.rows() == space.dimension() && matrix.cols() == space.dimension(),
          "operator shape does not match the space dimension");
  if (hermitian) {
    double scale = matrix.cwiseAbs().maxCoeff();
    double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (scale > 0 && dev > 1e-12 * scale)
      throw std::invalid_argument("matrix flagged hermitian is not self-adjoint");
  }
}

SpinState::SpinState(SpinSpace sp, Vector v) : space(std::move(sp)), amplitudes(std::move(v)) {
  require(amplitudes.size() == space.dimension(),
          "state length does not match the space dimension");
  double n = amplitudes.norm();
  require(std::abs(n - 1.0) < 1e-10, "state is not normalized");
}

CollectiveOps build_collective_ops(const SpinSystem& system) {
  require(system.atom_count >= 1, "atom count must be a positive integer");
  const int d = system.dimension();
  const double j = system.spin();

  Matrix z = Matrix::Zero(d, d);
  Matrix jplus = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = k - j;
    z(k, k) = m;
    if (k + 1 < d) jplus(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  Matrix jminus = jplus.adjoint();

  SpinSpace space(system);
  return CollectiveOps{
      system,
      SpinOperator(space, (jplus + jminus) / 2.0, true),
      SpinOperator(space, (jplus - jminus) / (2.0 * kI), true),
      SpinOperator(space, std::move(z), true),
  };
}

double casimir_deviation(const CollectiveOps& ops) {
  require(ops.x.space == ops.y.space && ops.y.space == ops.z.space,
          "operators come from different systems");
  const double j = ops.system.spin();
  Matrix total = ops.x.matrix * ops.x.matrix + ops.y.matrix * ops.y.matrix +
                 ops.z.matrix * ops.z.matrix;
  total -= j * (j + 1) * Matrix::Identity(total.rows(), total.cols());
  return total.cwiseAbs().maxCoeff();
}

SpinState coherent_state(const SpinSystem& system, double polar, double azimuth) {
  auto ops = build_collective_ops(system);
  Vector ground = Vector::Zero(system.dimension());
  ground(0) = 1.0;  // m = -j, all atoms in g2
  SpinState state(SpinSpace(system), std::move(ground));
  state = evolve(state, ops.y, polar);
  state = evolve(state, ops.z, azimuth);
  state.amplitudes.normalize();
  return state;
}

SpinState rotate(const SpinState& state, const Eigen::Vector3d& axis, double angle) {
  require(state.space.mode_count() == 1, "rotate expects a single-mode state");
  double n = axis.norm();
  require(n > 0, "rotation axis must be nonzero");
  Eigen::Vector3d u = axis / n;
  auto ops = build_collective_ops(state.space.mode(0));
  SpinOperator generator(state.space,
                         u.x() * ops.x.matrix + u.y() * ops.y.matrix + u.z() * ops.z.matrix,
                         true);
  return evolve(state, generator, angle);
}

namespace {

// Lanczos propagator for exp(-i H t) v with full reorthogonalization. The
// a-posteriori error estimate follows the usual beta * |corner entry| bound;
// the time interval is split whenever the estimate misses the tolerance.
Vector krylov_expv(const Matrix& h, const Vector& v, double t, double tol, int max_dim) {
  const auto n = v.size();
  Vector current = v;
  double remaining = t;
  double step = t;
  int guard = 0;

  while (std::abs(remaining) > 0 && guard++ < 1024) {
    if (std::abs(step) > std::abs(remaining)) step = remaining;
    const int m_max = std::min<int>(max_dim, static_cast<int>(n));
    Eigen::MatrixXcd basis(n, m_max);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_max);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m_max);

    double vnorm = current.norm();
    basis.col(0) = current / vnorm;
    int m = m_max;
    double breakdown = -1;
    for (int k = 0; k < m_max; ++k) {
      Vector w = h * basis.col(k);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= k; ++i) {
          Complex c = basis.col(i).dot(w);
          w -= c * basis.col(i);
          if (pass == 0 && i == k) alpha(k) += c.real();
        }
      beta(k) = w.norm();
      if (beta(k) < 1e-14 * vnorm) {  // happy breakdown: subspace is invariant
        m = k + 1;
        breakdown = 0;
        break;
      }
      if (k + 1 < m_max) basis.col(k + 1) = w / beta(k);
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      tri(k, k) = alpha(k);
      if (k + 1 < m) tri(k + 1, k) = tri(k, k + 1) = beta(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Eigen::VectorXcd phases(m);
    for (int k = 0; k < m; ++k) phases(k) = std::exp(Complex(0, -es.eigenvalues()(k) * step));
    Eigen::VectorXcd small = es.eigenvectors().cast<Complex>() *
                             (phases.array() * es.eigenvectors().row(0).transpose().cast<Complex>().array()).matrix();

    double err = breakdown >= 0 ? 0.0 : beta(m - 1) * std::abs(small(m - 1)) * std::abs(step);
    if (err > tol && std::abs(step) > 1e-12 * std::abs(t)) {
      step *= 0.5;
      continue;
    }
    current = vnorm * (basis.leftCols(m) * small);
    remaining -= step;
  }
  return current;
}

}  // namespace

SpinState evolve(const SpinState& state, const SpinOperator& hamiltonian, double t,
                 const EvolveOptions& options) {
  require(state.space == hamiltonian.space, "state and generator live on different spaces");
  if (!hamiltonian.hermitian)
    throw std::invalid_argument("evolve requires a Hermitian generator");

  bool dense = hamiltonian.space.dimension() <= kDenseEvolveLimit;
  if (options.backend == EvolveOptions::Backend::dense) dense = true;
  if (options.backend == EvolveOptions::Backend::krylov) dense = false;

  Vector result;
  if (dense) {
    HermitianPropagator prop(hamiltonian);
    return prop.apply(state, t);
  }
  result = krylov_expv(hamiltonian.matrix, state.amplitudes, t, options.krylov_tolerance,
                       options.krylov_dimension);
  result.normalize();
  return SpinState(state.space, std::move(result));
}

HermitianPropagator::HermitianPropagator(const SpinOperator& hamiltonian)
    : space_(hamiltonian.space) {
  if (!hamiltonian.hermitian)
    throw std::invalid_argument("propagator requires a Hermitian generator");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian.matrix);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

SpinState HermitianPropagator::apply(const SpinState& state, double t) const {
  Vector coeffs = eigenvectors_.adjoint() * state.amplitudes;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(Complex(0, -eigenvalues_(k) * t));
  return SpinState(space_, eigenvectors_ * coeffs);
}

Matrix HermitianPropagator::unitary(double t) const {
  Vector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(Complex(0, -eigenvalues_(k) * t));
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

SpinOperator embed(const SpinOperator& op, int mode_index, const SpinSpace& pair) {
  require(op.space.mode_count() == 1, "embed expects a single-mode operator");
  require(pair.mode_count() == 2, "embed expects a two-mode target space");
  require(mode_index == 0 || mode_index == 1, "mode index must be 0 or 1");
  require(pair.mode(mode_index) == op.space.mode(0),
          "operator dimension does not match the target mode");

  const int d1 = pair.mode(0).dimension();
  const int d2 = pair.mode(1).dimension();
  Matrix out = Matrix::Zero(d1 * d2, d1 * d2);
  if (mode_index == 0) {
    for (int r = 0; r < d1; ++r)
      for (int c = 0; c < d1; ++c)
        if (op.matrix(r, c) != 0.0)
          for (int k = 0; k < d2; ++k) out(r * d2 + k, c * d2 + k) = op.matrix(r, c);
  } else {
    for (int k = 0; k < d1; ++k) out.block(k * d2, k * d2, d2, d2) = op.matrix;
  }
  return SpinOperator(pair, std::move(out), op.hermitian);
}

double overlap(const SpinState& psi1, const SpinState& psi2) {
  require(psi1.space == psi2.space, "states live on different systems");
  return std::norm(psi1.amplitudes.dot(psi2.amplitudes));
}

Moments moments(const SpinState& state, const SpinOperator& op) {
  require(state.space == op.space, "state and operator live on different spaces");
  if (!op.hermitian) throw std::invalid_argument("moments requires a Hermitian operator");
  Vector applied = op.matrix * state.amplitudes;
  Complex mean = state.amplitudes.dot(applied);
  double scale = std::max(1.0, std::abs(mean));
  if (std::abs(mean.imag()) > 1e-10 * scale)
    throw std::runtime_error("expectation value has a non-negligible imaginary part");
  Vector centered = applied - mean.real() * state.amplitudes;
  return Moments{mean.real(), centered.squaredNorm()};
}

SpinOperator quasi_position(const CollectiveOps& ops) {
  double s = std::sqrt(2.0 / ops.system.atom_count);
  return SpinOperator(ops.z.space, s * ops.z.matrix, true);
}

SpinOperator quasi_momentum(const CollectiveOps& ops) {
  double s = std::sqrt(2.0 / ops.system.atom_count);
  return SpinOperator(ops.x.space, s * ops.x.matrix, true);
}

}  // namespace spincav
