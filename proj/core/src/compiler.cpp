#include "spincav/compiler.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace spincav {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Single-mode axis matrix lifted to the full tensor space.
class ModeOps {
 public:
  explicit ModeOps(const SpinSpace& space) : space_(space) {
    for (int m = 0; m < space.mode_count(); ++m) {
      auto ops = build_collective_ops(space.mode(m));
      axes_.push_back({lift(ops.x.matrix, m), lift(ops.y.matrix, m), lift(ops.z.matrix, m)});
    }
  }

  const Matrix& axis(int mode, Axis a) const {
    if (mode < 0 || mode >= static_cast<int>(axes_.size()))
      throw std::invalid_argument("generator references a mode outside the space");
    switch (a) {
      case Axis::x: return axes_[mode].x;
      case Axis::y: return axes_[mode].y;
      default: return axes_[mode].z;
    }
  }

 private:
  Matrix lift(const Matrix& m, int mode) const {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < space_.mode_count(); ++k) {
      const int d = space_.mode(k).dimension();
      out = kron(out, k == mode ? m : Matrix::Identity(d, d));
    }
    return out;
  }

  struct AxisSet {
    Matrix x, y, z;
  };
  SpinSpace space_;
  std::vector<AxisSet> axes_;
};

Matrix materialize_matrix(const Generator& generator, const ModeOps& ops, const SpinSpace& space) {
  const int d = space.dimension();
  return std::visit(
      [&](const auto& g) -> Matrix {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator>) {
          return g.x * ops.axis(g.mode, Axis::x) + g.y * ops.axis(g.mode, Axis::y) +
                 g.z * ops.axis(g.mode, Axis::z);
        } else if constexpr (std::is_same_v<T, TwistGenerator>) {
          const Matrix& z = ops.axis(g.mode, Axis::z);
          return (g.sign * g.strength) * (z * z).eval();
        } else if constexpr (std::is_same_v<T, PairGenerator>) {
          const Matrix& z1 = ops.axis(g.mode1, Axis::z);
          const Matrix& z2 = ops.axis(g.mode2, Axis::z);
          Matrix diff = z1 - z2;
          return g.omega * (z1 + g.beam_splitter_transmissivity * z2) +
                 g.chi * (diff * diff).eval();
        } else if constexpr (std::is_same_v<T, QndGenerator>) {
          return g.strength * (ops.axis(g.mode1, Axis::z) * ops.axis(g.mode2, Axis::z)).eval();
        } else {
          Matrix sum = Matrix::Zero(d, d);
          for (const auto& term : g.polynomial.terms) {
            Matrix prod = Matrix::Identity(d, d);
            for (const auto& f : term.factors) prod = prod * ops.axis(f.mode, f.axis);
            sum += term.coefficient * prod;
          }
          return sum;
        }
      },
      generator.value());
}

std::string cache_key(const Generator& generator, double duration) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator>) {
          s << "L" << g.mode << "," << g.x << "," << g.y << "," << g.z;
        } else if constexpr (std::is_same_v<T, TwistGenerator>) {
          s << "T" << g.mode << "," << g.sign << "," << g.strength;
        } else if constexpr (std::is_same_v<T, PairGenerator>) {
          s << "P" << g.mode1 << "," << g.mode2 << "," << g.omega << ","
            << g.beam_splitter_transmissivity << "," << g.chi;
        } else if constexpr (std::is_same_v<T, QndGenerator>) {
          s << "Q" << g.mode1 << "," << g.mode2 << "," << g.strength;
        } else {
          s << "W";
          for (const auto& term : g.polynomial.terms) {
            s << term.coefficient << "*";
            for (const auto& f : term.factors) s << f.mode << axis_name(f.axis);
            s << "+";
          }
        }
      },
      generator.value());
  s << "@" << duration;
  return s.str();
}

}  // namespace

SpinOperator materialize(const PolynomialHamiltonian& poly, const SpinSpace& space) {
  require(poly.max_mode() < space.mode_count(), "polynomial references an unknown mode index");
  return materialize(Generator(WordGenerator{poly}), space);
}

SpinOperator materialize(const Generator& generator, const SpinSpace& space) {
  ModeOps ops(space);
  Matrix m = materialize_matrix(generator, ops, space);
  double scale = m.cwiseAbs().maxCoeff();
  bool hermitian =
      scale == 0.0 || (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1.0);
  return SpinOperator(space, std::move(m), hermitian);
}

namespace {

void append_rotation(PulseSequence& seq, const LinearGenerator& rotation, double angle) {
  if (angle == 0) return;
  if (angle > 0)
    seq.append(Generator(rotation), angle);
  else
    seq.append(Generator(rotation).negated(), -angle);
}

}  // namespace

PulseSequence conjugate_by_rotation(const Generator& generator, const LinearGenerator& rotation,
                                    double angle, double duration) {
  PulseSequence out;
  append_rotation(out, rotation, angle);
  out.append(generator, duration);
  append_rotation(out, rotation, -angle);
  return out;
}

PulseSequence conjugate_sequence(const PulseSequence& inner, const LinearGenerator& rotation,
                                 double angle) {
  PulseSequence out;
  append_rotation(out, rotation, angle);
  out.append(inner);
  append_rotation(out, rotation, -angle);
  out.metadata = inner.metadata;
  return out;
}

PulseSequence group_commutator_gadget(const EvolutionRecipe& a, const EvolutionRecipe& b,
                                      double dt_a, double dt_b) {
  require(dt_a > 0 && dt_b > 0, "gadget durations must be positive");
  PulseSequence fa = a(dt_a);
  PulseSequence fb = b(dt_b);
  PulseSequence out;
  out.append(inverse_of(fb));
  out.append(inverse_of(fa));
  out.append(fb);
  out.append(fa);
  out.metadata.method = "group-commutator";
  out.metadata.error_order = 3;
  return out;
}

PulseSequence group_commutator_gadget(const Generator& a, const Generator& b, double dt) {
  auto recipe = [](const Generator& g) {
    return [g](double d) {
      PulseSequence s;
      s.append(g, d);
      return s;
    };
  };
  PulseSequence out = group_commutator_gadget(EvolutionRecipe(recipe(a)),
                                              EvolutionRecipe(recipe(b)), dt, dt);
  out.metadata.target = "-i[" + a.describe() + ", " + b.describe() + "]";
  return out;
}

PulseSequence trotter_compose(const std::vector<PulseSequence>& segments, int repetitions,
                              int order) {
  require(repetitions >= 1, "repetition count must be at least 1");
  require(order == 1 || order == 2, "only first and second order are provided");
  require(!segments.empty(), "nothing to compose");

  PulseSequence rep;
  const double inv = 1.0 / repetitions;
  if (order == 1) {
    for (const auto& seg : segments) rep.append(scaled_durations(seg, inv));
  } else {
    const size_t last = segments.size() - 1;
    for (size_t k = 0; k < last; ++k) rep.append(scaled_durations(segments[k], inv / 2));
    rep.append(scaled_durations(segments[last], inv));
    for (size_t k = last; k-- > 0;) rep.append(scaled_durations(segments[k], inv / 2));
  }

  PulseSequence out;
  for (int k = 0; k < repetitions; ++k) out.append(rep);
  out.metadata.method = order == 1 ? "trotter-1" : "trotter-2";
  out.metadata.error_order = order + 1;
  return out;
}

PulseSequence qnd_four_step(const PairGenerator& pair, double total_duration) {
  require(total_duration >= 0, "duration must be non-negative");
  const double tau = total_duration / 4.0;
  PairGenerator flipped = pair;
  flipped.chi = -pair.chi;
  const LinearGenerator x1{pair.mode1, 1, 0, 0};
  const LinearGenerator x2{pair.mode2, 1, 0, 0};

  PulseSequence out;
  out.append(Generator(pair), tau);  // (+Z1, +Z2, +chi)

  PulseSequence seg2;                // (-Z1, +Z2, -chi)
  seg2.append(Generator(flipped), tau);
  out.append(conjugate_sequence(seg2, x1, kPi));

  PulseSequence seg3;                // (-Z1, -Z2, +chi)
  seg3.append(Generator(pair), tau);
  out.append(conjugate_sequence(conjugate_sequence(seg3, x2, kPi), x1, kPi));

  PulseSequence seg4;                // (+Z1, -Z2, -chi)
  seg4.append(Generator(flipped), tau);
  out.append(conjugate_sequence(seg4, x2, kPi));

  out.metadata.target = "-2 chi Z1 Z2";
  out.metadata.method = "four-step sign composition";
  return out;
}

namespace {

EvolutionRecipe single_step(Generator g) {
  return [g = std::move(g)](double d) {
    PulseSequence s;
    s.append(g, d);
    return s;
  };
}

EvolutionRecipe scaled(EvolutionRecipe r, double factor) {
  return [r = std::move(r), factor](double d) { return r(factor * d); };
}

EvolutionRecipe summed(EvolutionRecipe a, EvolutionRecipe b) {
  return [a = std::move(a), b = std::move(b)](double d) {
    PulseSequence s = a(d);
    s.append(b(d));
    return s;
  };
}

// exp(+i theta R) (sign Z^2) exp(-i theta R) on `mode`, i.e. a rotated twist.
EvolutionRecipe rotated_twist(int mode, LinearGenerator rotation, double angle, int sign) {
  return [=](double d) {
    return conjugate_by_rotation(Generator(TwistGenerator{mode, sign, 1.0}), rotation, angle, d);
  };
}

// Difference-of-squares recipes for the Hermitian quadratic words; each is a
// first-order split into two conjugated twists, which the gadget's reverse
// steps cancel back to third order.
EvolutionRecipe quad_zz_minus_yy(int mode) {  // Z^2 - Y^2
  return summed(single_step(Generator(TwistGenerator{mode, +1, 1.0})),
                rotated_twist(mode, {mode, 1, 0, 0}, kPi / 2, -1));
}

EvolutionRecipe quad_yz(int mode) {  // YZ + ZY = (Y+Z)^2/2 - (Y-Z)^2/2
  return summed(rotated_twist(mode, {mode, 1, 0, 0}, kPi / 4, +1),
                rotated_twist(mode, {mode, 1, 0, 0}, -kPi / 4, -1));
}

EvolutionRecipe quad_xy(int mode) {  // XY + YX
  const double s = std::sqrt(0.5);
  return summed(rotated_twist(mode, {mode, s, -s, 0}, kPi / 2, +1),
                rotated_twist(mode, {mode, s, s, 0}, kPi / 2, -1));
}

EvolutionRecipe quad_xz(int mode) {  // XZ + ZX
  return summed(rotated_twist(mode, {mode, 0, 1, 0}, -kPi / 4, +1),
                rotated_twist(mode, {mode, 0, 1, 0}, -3 * kPi / 4, -1));
}

EvolutionRecipe quad_xx(int mode) {  // X^2
  return rotated_twist(mode, {mode, 0, 1, 0}, -kPi / 2, +1);
}

// Repeated inner gadget realizing exp(-i(-i[Q,R]) u).
EvolutionRecipe commutator_recipe(EvolutionRecipe q, EvolutionRecipe r, double dt_hint) {
  return [q = std::move(q), r = std::move(r), dt_hint](double u) {
    const int m = std::max(1, static_cast<int>(std::ceil(u / (dt_hint * dt_hint))));
    const double delta = std::sqrt(u / m);
    PulseSequence gadget = group_commutator_gadget(q, r, delta, delta);
    PulseSequence out;
    for (int k = 0; k < m; ++k) out.append(gadget);
    return out;
  };
}

}  // namespace

PulseSequence synth_x3(double dt, double simulated_time) {
  require(dt > 0 && simulated_time > 0, "dt and simulated time must be positive");
  const int reps = std::max(1, static_cast<int>(std::ceil(simulated_time / (dt * dt))));
  const double step = std::sqrt(simulated_time / reps);
  const int mode = 0;

  // X^3 = (i/4)[(Z^2-Y^2),(YZ+ZY)] + (i/4)[(XZ+ZX),(XY+YX)] + X/4
  PulseSequence rep;
  rep.append(group_commutator_gadget(scaled(quad_yz(mode), 0.25), quad_zz_minus_yy(mode), step,
                                     step));
  rep.append(group_commutator_gadget(scaled(quad_xy(mode), 0.25), quad_xz(mode), step, step));
  rep.append(Generator(LinearGenerator{mode, 0.25, 0, 0}), step * step);

  PulseSequence out;
  for (int k = 0; k < reps; ++k) out.append(rep);
  out.metadata.target = "X^3";
  out.metadata.method = "commutator identity, group-commutator gadgets";
  out.metadata.error_order = 1;
  return out;
}

PulseSequence synth_x3z(double dt, double simulated_time) {
  require(dt > 0 && simulated_time > 0, "dt and simulated time must be positive");
  const int reps = std::max(1, static_cast<int>(std::ceil(simulated_time / (dt * dt))));
  const double step = std::sqrt(simulated_time / reps);

  const Generator qnd{QndGenerator{0, 1, 1.0}};
  const LinearGenerator y1{0, 0, 1, 0};
  auto x1z2 = [&](double d) { return conjugate_by_rotation(qnd, y1, -kPi / 2, d); };

  // X1^3 Z2 = (1/4) X1 Z2 + (1/4)[(Z1^2-Y1^2),[Z1^2, X1 Z2]]
  //                       - (1/4)[X1 Z1 + Z1 X1, [X1^2, Z1 Z2]]
  auto inner1 = commutator_recipe(single_step(Generator(TwistGenerator{0, +1, 1.0})),
                                  EvolutionRecipe(x1z2), step);
  auto inner2 = commutator_recipe(quad_xx(0), single_step(qnd), step);

  PulseSequence rep;
  rep.append(x1z2(step * step / 4.0));
  rep.append(group_commutator_gadget(scaled(inner1, 0.25), quad_zz_minus_yy(0), step, step));
  rep.append(group_commutator_gadget(scaled(quad_xz(0), 0.25), inner2, step, step));

  PulseSequence out;
  for (int k = 0; k < reps; ++k) out.append(rep);
  out.metadata.target = "X1^3 Z2";
  out.metadata.method = "nested commutator identity, group-commutator gadgets";
  out.metadata.error_order = 1;
  return out;
}

Matrix sequence_to_unitary(const PulseSequence& seq, const SpinSpace& space) {
  if (space.dimension() > 20000)
    throw std::invalid_argument("space dimension exceeds the 2e4 sequence guard");

  ModeOps ops(space);
  std::unordered_map<std::string, Matrix> cache;
  Matrix u = Matrix::Identity(space.dimension(), space.dimension());
  for (const auto& pulse : seq.steps) {
    if (pulse.duration == 0) continue;
    const std::string key = cache_key(pulse.generator, pulse.duration);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Matrix m = materialize_matrix(pulse.generator, ops, space);
      SpinOperator op(space, std::move(m), true);
      it = cache.emplace(key, HermitianPropagator(op).unitary(pulse.duration)).first;
    }
    u = it->second * u;
  }
  return u;
}

EffectiveGenerator effective_generator(const Matrix& unitary, const SpinSpace& space, double t) {
  require(t != 0, "effective generator needs a nonzero duration");
  Eigen::ComplexSchur<Matrix> schur(unitary);
  const Matrix& q = schur.matrixU();
  const Matrix& tmat = schur.matrixT();

  const Eigen::Index d = unitary.rows();
  Eigen::VectorXd phases(d);
  bool warn = false;
  for (Eigen::Index k = 0; k < d; ++k) {
    double phi = std::arg(tmat(k, k));  // in (-pi, pi]
    if (std::min(std::abs(phi - kPi), std::abs(phi + kPi)) < 1e-6) warn = true;
    phases(k) = -phi / t;
  }
  Matrix h = q * phases.cast<Complex>().asDiagonal() * q.adjoint();
  h = ((h + h.adjoint()) / 2.0).eval();
  return EffectiveGenerator{SpinOperator(space, std::move(h), true), warn};
}

}  // namespace spincav
