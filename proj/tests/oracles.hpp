#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "spincav/cavity.hpp"

// Test-only oracles, independent of the closed forms they check.

namespace spincav::testing {

// Output amplitudes (a, b, c, d) of the two-cavity Michelson obtained by
// solving the four coupled beam-splitter relations numerically, under the
// same resonance path conventions (round-trip factors +1, -1, +1 for arms
// a, b, c).
inline Eigen::Vector4cd michelson_solved(const PhysicalParams& p, double phi1, double phi2) {
  using C = std::complex<double>;
  const double tb = std::sqrt(p.beam_splitter_transmissivity);
  const C irb = C(0, 1) * std::sqrt(1.0 - p.beam_splitter_transmissivity);
  const double ldk2 = 2.0 * p.cavity_length * p.detuning;
  const C fa = cavity_reflection(phi1 + ldk2, p.mirror_transmissivity, p.roundtrip_loss);
  const C fc = cavity_reflection(phi2 + ldk2, p.mirror_transmissivity, p.roundtrip_loss);
  const C ea = 1.0, eb = -1.0, ec = 1.0;

  // a = irb + tb c ec fc ; b = tb + irb c ec fc ;
  // c = tb a ea fa + irb b eb ; d = tb b eb + irb a ea fa
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(0, 2) = -tb * ec * fc;
  m(1, 2) = -irb * ec * fc;
  m(2, 0) = -tb * ea * fa;
  m(2, 1) = -irb * eb;
  m(3, 0) = -irb * ea * fa;
  m(3, 1) = -tb * eb;
  Eigen::Vector4cd rhs(irb, C(tb), C(0), C(0));
  return m.colPivHouseholderQr().solve(rhs);
}

// Least-squares fit of y against the supplied basis columns.
inline Eigen::VectorXd least_squares(const std::vector<std::vector<double>>& columns,
                                     const std::vector<double>& y) {
  Eigen::MatrixXd a(y.size(), columns.size());
  Eigen::VectorXd b(y.size());
  for (size_t r = 0; r < y.size(); ++r) {
    b(static_cast<Eigen::Index>(r)) = y[r];
    for (size_t c = 0; c < columns.size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
  }
  return a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size()), ones(x.size(), 1.0);
  for (size_t k = 0; k < x.size(); ++k) {
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  return least_squares({lx, ones}, ly)(0);
}

// Random Michelson parameters in the regime of the closed forms.
inline PhysicalParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  PhysicalParams p;
  p.wavelength_ratio = 1e-2;
  p.linewidth_ratio = 1.782e-3;
  p.mirror_transmissivity = std::pow(10.0, -3.0 + 2.0 * uni(rng));
  p.roundtrip_loss = uni(rng) * p.mirror_transmissivity / 10.0;
  p.beam_splitter_transmissivity = 0.05 + 0.9 * uni(rng);
  p.cavity_length = 26e-3;
  p.detuning = (uni(rng) - 0.5) * p.mirror_transmissivity / p.cavity_length;
  return p;
}

}  // namespace spincav::testing
