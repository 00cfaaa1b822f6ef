#pragma once

#include <functional>

#include "spincav/generators.hpp"
#include "spincav/spin.hpp"

// Pulse-sequence synthesis from the primitive set (rotations, +-Z^2 twists,
// the pair Hamiltonian, QND) and exact verification instruments.
//
// Sequence semantics: steps are listed in time order; the compiled unitary is
// U = U_n ... U_2 U_1 with U_k = exp(-i H_k t_k).
//
// Group-commutator convention (fixed by the X,Y -> Z check at N=6): the
// four-step gadget runs -B, -A, +B, +A in time, i.e.
// U = e^{-iA dt} e^{-iB dt} e^{+iA dt} e^{+iB dt}, whose effective generator
// is -i[A,B] over the effective duration dt_a * dt_b.

namespace spincav {

SpinOperator materialize(const PolynomialHamiltonian& poly, const SpinSpace& space);
SpinOperator materialize(const Generator& generator, const SpinSpace& space);

/// Three steps: rotation, the generator step, inverse rotation. Realizes the
/// conjugated generator e^{i angle R} H e^{-i angle R} for `duration`, where
/// R is the linear rotation generator.
PulseSequence conjugate_by_rotation(const Generator& generator, const LinearGenerator& rotation,
                                    double angle, double duration);

/// Wraps a whole sequence between the rotation and its inverse.
PulseSequence conjugate_sequence(const PulseSequence& inner, const LinearGenerator& rotation,
                                 double angle);

PulseSequence group_commutator_gadget(const Generator& a, const Generator& b, double dt);

/// A recipe produces a primitive-step sequence realizing exp(-i G d) for the
/// generator it stands for; inverses are taken by formal reversal so that
/// composite sides keep the gadget's third-order error.
using EvolutionRecipe = std::function<PulseSequence(double duration)>;

PulseSequence group_commutator_gadget(const EvolutionRecipe& a, const EvolutionRecipe& b,
                                      double dt_a, double dt_b);

/// Suzuki-Trotter interleaving of segments, n repetitions. order 1 is the
/// plain product, order 2 the symmetrized one. Segment durations are scaled
/// by 1/n (1/(2n) for the symmetrized halves); segments must scale linearly
/// in time for this to be meaningful.
PulseSequence trotter_compose(const std::vector<PulseSequence>& segments, int repetitions,
                              int order = 1);

/// Four equal segments in the sign pattern (+,+,+chi), (-,+,-chi), (-,-,+chi),
/// (+,-,-chi) with the Z flips done by pi rotations about the mode X axes.
/// Realizes exp(+i 2 chi Z1 Z2 tau) exactly (all segment generators commute).
PulseSequence qnd_four_step(const PairGenerator& pair, double total_duration);

/// X^3 synthesis from the commutator identity; gadget repetitions scale as
/// simulated_time / dt^2.
PulseSequence synth_x3(double dt, double simulated_time);

/// X1^3 Z2 synthesis from the nested-commutator identity on two modes.
PulseSequence synth_x3z(double dt, double simulated_time);

/// Ordered product of step exponentials. Rejects spaces above 2e4 dimensions.
Matrix sequence_to_unitary(const PulseSequence& seq, const SpinSpace& space);

struct EffectiveGenerator {
  SpinOperator op;
  bool branch_warning = false;  // some eigenphase within 1e-6 of +-pi
};

/// H_eff = (i/t) log U via Schur decomposition, eigenphases in (-pi, pi].
EffectiveGenerator effective_generator(const Matrix& unitary, const SpinSpace& space, double t);

}  // namespace spincav
