#include "spincav/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spincav {

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

Axis axis_from_name(char name) {
  switch (name) {
    case 'x': case 'X': return Axis::x;
    case 'y': case 'Y': return Axis::y;
    case 'z': case 'Z': return Axis::z;
  }
  throw std::invalid_argument("unknown axis name");
}

PolynomialHamiltonian PolynomialHamiltonian::symmetrized(
    double coefficient, std::vector<OperatorWord::Factor> factors) {
  std::vector<OperatorWord::Factor> reversed(factors.rbegin(), factors.rend());
  if (reversed == factors) return word(coefficient, std::move(factors));
  PolynomialHamiltonian out;
  out.terms.push_back({coefficient / 2.0, factors});
  out.terms.push_back({coefficient / 2.0, reversed});
  return out;
}

PolynomialHamiltonian PolynomialHamiltonian::word(double coefficient,
                                                  std::vector<OperatorWord::Factor> factors) {
  PolynomialHamiltonian out;
  out.terms.push_back({coefficient, std::move(factors)});
  return out;
}

PolynomialHamiltonian& PolynomialHamiltonian::operator+=(const PolynomialHamiltonian& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

PolynomialHamiltonian PolynomialHamiltonian::negated() const {
  PolynomialHamiltonian out = *this;
  for (auto& term : out.terms) term.coefficient = -term.coefficient;
  return out;
}

bool PolynomialHamiltonian::formally_hermitian() const {
  // Collapse terms by word, then demand coeff(word) == coeff(reverse).
  auto key = [](const std::vector<OperatorWord::Factor>& f) {
    std::ostringstream s;
    for (const auto& x : f) s << x.mode << axis_name(x.axis) << '.';
    return s.str();
  };
  std::vector<std::pair<std::string, double>> collapsed;
  auto add = [&](const std::string& k, double c) {
    for (auto& [kk, cc] : collapsed)
      if (kk == k) {
        cc += c;
        return;
      }
    collapsed.emplace_back(k, c);
  };
  for (const auto& term : terms) add(key(term.factors), term.coefficient);
  for (const auto& term : terms) {
    std::vector<OperatorWord::Factor> rev(term.factors.rbegin(), term.factors.rend());
    double forward = 0, backward = 0;
    for (auto& [kk, cc] : collapsed) {
      if (kk == key(term.factors)) forward = cc;
      if (kk == key(rev)) backward = cc;
    }
    if (std::abs(forward - backward) > 1e-12 * std::max(1.0, std::abs(forward))) return false;
  }
  return true;
}

int PolynomialHamiltonian::max_mode() const {
  int m = 0;
  for (const auto& term : terms)
    for (const auto& f : term.factors) m = std::max(m, f.mode);
  return m;
}

Generator Generator::negated() const {
  return std::visit(
      [](const auto& g) -> Generator {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator>) {
          return LinearGenerator{g.mode, -g.x, -g.y, -g.z};
        } else if constexpr (std::is_same_v<T, TwistGenerator>) {
          return TwistGenerator{g.mode, -g.sign, g.strength};
        } else if constexpr (std::is_same_v<T, PairGenerator>) {
          return PairGenerator{g.mode1, g.mode2, -g.omega, g.beam_splitter_transmissivity,
                               -g.chi};
        } else if constexpr (std::is_same_v<T, QndGenerator>) {
          return QndGenerator{g.mode1, g.mode2, -g.strength};
        } else {
          return WordGenerator{g.polynomial.negated()};
        }
      },
      value_);
}

std::vector<int> Generator::modes() const {
  return std::visit(
      [](const auto& g) -> std::vector<int> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator> || std::is_same_v<T, TwistGenerator>) {
          return {g.mode};
        } else if constexpr (std::is_same_v<T, PairGenerator> ||
                             std::is_same_v<T, QndGenerator>) {
          return {g.mode1, g.mode2};
        } else {
          std::vector<int> out;
          for (const auto& term : g.polynomial.terms)
            for (const auto& f : term.factors)
              if (std::find(out.begin(), out.end(), f.mode) == out.end()) out.push_back(f.mode);
          return out;
        }
      },
      value_);
}

std::string Generator::describe() const {
  std::ostringstream s;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator>) {
          s << "linear(m" << g.mode << ": " << g.x << "X+" << g.y << "Y+" << g.z << "Z)";
        } else if constexpr (std::is_same_v<T, TwistGenerator>) {
          s << "twist(m" << g.mode << ": " << g.sign * g.strength << " Z^2)";
        } else if constexpr (std::is_same_v<T, PairGenerator>) {
          s << "pair(m" << g.mode1 << ",m" << g.mode2 << ": omega=" << g.omega
            << " chi=" << g.chi << ")";
        } else if constexpr (std::is_same_v<T, QndGenerator>) {
          s << "qnd(m" << g.mode1 << ",m" << g.mode2 << ": " << g.strength << " Z1Z2)";
        } else {
          s << "word(";
          for (const auto& term : g.polynomial.terms) {
            s << term.coefficient << "*";
            for (const auto& f : term.factors) s << axis_name(f.axis) << f.mode;
            s << " ";
          }
          s << ")";
        }
      },
      value_);
  return s.str();
}

double PulseSequence::total_duration() const {
  double sum = 0;
  for (const auto& step : steps) sum += step.duration;
  return sum;
}

PulseSequence& PulseSequence::append(Generator g, double duration) {
  if (duration < 0 || !std::isfinite(duration))
    throw std::invalid_argument("step duration must be finite and non-negative");
  steps.push_back({std::move(g), duration});
  return *this;
}

PulseSequence& PulseSequence::append(const PulseSequence& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  return *this;
}

PulseSequence inverse_of(const PulseSequence& seq) {
  PulseSequence out;
  out.metadata = seq.metadata;
  for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it)
    out.steps.push_back({it->generator.negated(), it->duration});
  return out;
}

PulseSequence scaled_durations(const PulseSequence& seq, double factor) {
  if (factor < 0) throw std::invalid_argument("duration scale must be non-negative");
  PulseSequence out = seq;
  for (auto& step : out.steps) step.duration *= factor;
  return out;
}

}  // namespace spincav
