#pragma once

#include <string>
#include <variant>
#include <vector>

// Symbolic generators for pulse-sequence synthesis. Every generator maps to a
// Hermitian operator through materialize() in compiler.hpp. Sign flips
// correspond to physical knobs: microwave phase for LINEAR, cavity detuning
// for TWIST and QND, and for PAIR the combination of atomic-detuning side
// (omega) and cavity detuning (chi).

namespace spincav {

enum class Axis { x, y, z };

char axis_name(Axis axis);
Axis axis_from_name(char name);

/// One ordered product of single-mode operators with a real coefficient.
struct OperatorWord {
  struct Factor {
    int mode = 0;
    Axis axis = Axis::x;
    friend bool operator==(const Factor&, const Factor&) = default;
  };
  double coefficient = 0;
  std::vector<Factor> factors;
};

/// Real combination of ordered operator words. Formally Hermitian when every
/// word is accompanied by its reverse at equal coefficient (or self-reversed).
struct PolynomialHamiltonian {
  std::vector<OperatorWord> terms;

  PolynomialHamiltonian() = default;
  explicit PolynomialHamiltonian(std::vector<OperatorWord> t) : terms(std::move(t)) {}

  /// coeff * (word + reversed word), halved when the word is its own reverse.
  static PolynomialHamiltonian symmetrized(double coefficient,
                                           std::vector<OperatorWord::Factor> factors);
  /// A single word.
  static PolynomialHamiltonian word(double coefficient,
                                    std::vector<OperatorWord::Factor> factors);

  PolynomialHamiltonian& operator+=(const PolynomialHamiltonian& other);
  PolynomialHamiltonian negated() const;
  bool formally_hermitian() const;
  int max_mode() const;
};

struct LinearGenerator {
  int mode = 0;
  double x = 0, y = 0, z = 0;
};

struct TwistGenerator {
  int mode = 0;
  int sign = +1;       // flipped by the cavity detuning
  double strength = 0; // coefficient of Z^2 is sign * strength
};

/// The two-cavity Hamiltonian shape omega(Z1 + T_B Z2) + chi (Z1 - Z2)^2.
struct PairGenerator {
  int mode1 = 0, mode2 = 1;
  double omega = 0;
  double beam_splitter_transmissivity = 0.5;
  double chi = 0;
};

struct QndGenerator {
  int mode1 = 0, mode2 = 1;
  double strength = 0;  // coefficient of Z1 Z2
};

struct WordGenerator {
  PolynomialHamiltonian polynomial;
};

class Generator {
 public:
  using Value =
      std::variant<LinearGenerator, TwistGenerator, PairGenerator, QndGenerator, WordGenerator>;

  Generator() : value_(LinearGenerator{}) {}
  Generator(LinearGenerator g) : value_(g) {}
  Generator(TwistGenerator g) : value_(g) {}
  Generator(PairGenerator g) : value_(g) {}
  Generator(QndGenerator g) : value_(g) {}
  Generator(WordGenerator g) : value_(std::move(g)) {}

  const Value& value() const { return value_; }

  /// Exact formal negation via the documented physical knob.
  Generator negated() const;
  std::vector<int> modes() const;
  std::string describe() const;

 private:
  Value value_;
};

struct PulseStep {
  Generator generator;
  double duration = 0;
};

struct SequenceMetadata {
  std::string target;
  std::string method;
  int error_order = 0;
};

struct PulseSequence {
  std::vector<PulseStep> steps;
  SequenceMetadata metadata;

  double total_duration() const;
  PulseSequence& append(Generator g, double duration);
  PulseSequence& append(const PulseSequence& other);
};

/// Reversed step order with negated generators; the exact formal inverse.
PulseSequence inverse_of(const PulseSequence& seq);

/// All durations multiplied by factor (factor >= 0).
PulseSequence scaled_durations(const PulseSequence& seq, double factor);

}  // namespace spincav
