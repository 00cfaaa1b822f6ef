#include "spincav/michelson.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spincav {

namespace {

constexpr double kPi = std::numbers::pi;

struct Splitting {
  double tb, rb;  // amplitude factors
  double TB, RB;
};

Splitting splitting(const PhysicalParams& params) {
  const double TB = params.beam_splitter_transmissivity;
  return {std::sqrt(TB), std::sqrt(1.0 - TB), TB, 1.0 - TB};
}

}  // namespace

MichelsonAmplitudes michelson_amplitudes(const PhysicalParams& params, double phi1, double phi2) {
  const auto s = splitting(params);
  const double T = params.mirror_transmissivity;
  const double eps = params.roundtrip_loss;
  const double ldk2 = 2.0 * params.cavity_length * params.detuning;
  const std::complex<double> i{0.0, 1.0};

  MichelsonAmplitudes out;
  out.f_a = cavity_reflection(phi1 + ldk2, T, eps);
  out.f_c = cavity_reflection(phi2 + ldk2, T, eps);
  // Path factors fixed by the resonance conventions: e^{i2L_a k} = e^{i2L_c k} = 1,
  // e^{i2L_b k} = -1.
  const std::complex<double> den = 1.0 - s.RB * out.f_c - s.TB * out.f_a * out.f_c;
  out.a = i * s.rb * (1.0 - out.f_c) / den;
  out.b = s.tb * (1.0 - out.f_a * out.f_c) / den;
  out.c = i * s.rb * s.tb * (out.f_a - 1.0) / den;
  out.d = (-s.TB - s.RB * out.f_a + out.f_a * out.f_c) / den;
  return out;
}

MichelsonIntensities michelson_intensities(const PhysicalParams& params, double phi1,
                                           double phi2) {
  const auto s = splitting(params);
  const double T = params.mirror_transmissivity;
  const double eps = params.roundtrip_loss;
  const double ldk2 = 2.0 * params.cavity_length * params.detuning;

  const std::complex<double> fa = cavity_reflection(phi1 + ldk2, T, eps);
  const std::complex<double> fc = cavity_reflection(phi2 + ldk2, T, eps);
  const double Fa = std::abs(fa), Fc = std::abs(fc);
  const double da = std::arg(fa) - kPi;  // gamma_a + 2(L_a - L_b)k
  const double dc = std::arg(fc) + kPi;  // gamma_c + 2(L_c + L_b)k

  MichelsonIntensities out;
  out.j = 1.0 + s.RB * s.RB * Fc * Fc + s.TB * s.TB * Fa * Fa * Fc * Fc +
          2.0 * s.RB * Fc * std::cos(dc) - 2.0 * s.TB * Fa * Fc * std::cos(da + dc) -
          2.0 * s.RB * s.TB * Fa * Fc * Fc * std::cos(da);
  out.a2 = s.RB * (1.0 + Fc * Fc + 2.0 * Fc * std::cos(dc)) / out.j;
  out.b2 = s.TB * (1.0 + Fa * Fa * Fc * Fc - 2.0 * Fa * Fc * std::cos(da + dc)) / out.j;
  out.c2 = s.RB * s.TB * (1.0 + Fa * Fa + 2.0 * Fa * std::cos(da)) / out.j;
  out.d2 = (s.TB * s.TB + s.RB * s.RB * Fa * Fa + Fa * Fa * Fc * Fc -
            2.0 * s.TB * Fa * Fc * std::cos(da + dc) - 2.0 * s.RB * s.TB * Fa * std::cos(da) +
            2.0 * s.RB * Fa * Fa * Fc * std::cos(dc)) /
           out.j;
  return out;
}

LossEstimate michelson_loss_estimate(double beam_splitter_transmissivity, double loss,
                                     double transmissivity) {
  LossEstimate out;
  out.estimate = 1.0 - 4.0 * (1.0 - beam_splitter_transmissivity) /
                           (1.0 + beam_splitter_transmissivity) * loss / transmissivity;

  PhysicalParams at_resonance;
  at_resonance.mirror_transmissivity = transmissivity;
  at_resonance.roundtrip_loss = loss;
  at_resonance.beam_splitter_transmissivity = beam_splitter_transmissivity;
  out.exact = michelson_intensities(at_resonance, 0.0, 0.0).d2;
  return out;
}

PowerRatios intracavity_power_ratios(const PhysicalParams& params, double z1, double z2,
                                     PowerForm form) {
  const auto s = splitting(params);
  const double T = params.mirror_transmissivity;
  const double eps = params.roundtrip_loss;
  const double ldk = params.cavity_length * params.detuning;
  const double dphi = phase_per_atom(params);
  const double phi1 = 2.0 * dphi * z1;
  const double phi2 = 2.0 * dphi * z2;
  const double a1 = phi1 + 2.0 * ldk;
  const double a2 = phi2 + 2.0 * ldk;
  const double opt = 1.0 + s.TB;
  const double den = phi2 + s.TB * phi1 + opt * 2.0 * ldk;

  PowerRatios out;
  switch (form) {
    case PowerForm::lorentzian:
      out.p1 = 4.0 / T * s.RB / (opt * opt) * (eps * eps + 4.0 * a2 * a2) /
               (eps * eps + 4.0 / (opt * opt) * den * den);
      out.p2 = 4.0 / T * s.RB * s.TB / (opt * opt) * (eps * eps + 4.0 * a1 * a1) /
               (eps * eps + 4.0 / (opt * opt) * den * den);
      break;
    case PowerForm::large_detuning:
      out.p1 = 4.0 * s.RB / T * a2 * a2 / (den * den);
      out.p2 = 4.0 * s.RB * s.TB / T * a1 * a1 / (den * den);
      break;
    case PowerForm::linearized:
      out.p1 = 4.0 / T * s.RB / (opt * opt) * (1.0 + s.TB * (phi2 - phi1) / (opt * ldk));
      out.p2 = 4.0 / T * s.RB * s.TB / (opt * opt) * (1.0 + (phi1 - phi2) / (opt * ldk));
      break;
  }
  out.linearization_valid =
      std::max(std::abs(phi1), std::abs(phi2)) <= 0.1 * std::abs(ldk);
  return out;
}

IntracavityPowers intracavity_powers(const PhysicalParams& params, double z1, double z2,
                                     PowerForm form) {
  const auto ratios = intracavity_power_ratios(params, z1, z2, form);
  const double p0 = params.input_power_value();
  return IntracavityPowers{ratios.p1 * p0, ratios.p2 * p0, ratios.linearization_valid};
}

double pair_hamiltonian(const PhysicalParams& params, double z1, double z2, PowerForm form) {
  const auto ratios = intracavity_power_ratios(params, z1, z2, form);
  const double rate = params.photon_rate_value();
  // omega_ac per unit circulating rate, applied to P_j/P0 * R.
  return 2.0 * (ac_stark_shift_from_rate(params, ratios.p1 * rate) * z1 +
                ac_stark_shift_from_rate(params, ratios.p2 * rate) * z2);
}

HamiltonianCoeffs pair_coeffs(const PhysicalParams& params) {
  const auto s = splitting(params);
  const double T = params.mirror_transmissivity;
  const double lw = params.wavelength_ratio;
  const double gd = params.linewidth_ratio;
  const double rate = params.photon_rate_value();
  const double ldk = params.cavity_length * params.detuning;
  const double opt = 1.0 + s.TB;

  HamiltonianCoeffs out;
  out.omega = 64.0 * 3.0 / (kPi * kPi) * s.RB / (opt * opt) / T * lw * lw * gd * rate;
  out.chi = -(256.0 * 9.0) / (kPi * kPi * kPi * kPi) * s.RB * s.TB / (opt * opt * opt) /
            (T * ldk) * std::pow(lw, 4) * gd * gd * rate;

  // |Dk| >> eps/(2L), ">>" pinned at a factor of ten.
  const double needed = 10.0 * params.roundtrip_loss;
  const double have = 2.0 * std::abs(ldk);
  out.validity_margin = needed > 0 ? have / needed : std::numeric_limits<double>::infinity();
  out.linearization_valid = out.validity_margin >= 1.0;
  return out;
}

double four_step_hamiltonian(const PhysicalParams& params, double z1, double z2,
                             PowerForm form) {
  PhysicalParams flipped = params;
  flipped.detuning = -params.detuning;
  double sum = pair_hamiltonian(params, z1, z2, form);
  sum += pair_hamiltonian(flipped, -z1, z2, form);
  sum += pair_hamiltonian(params, -z1, -z2, form);
  sum += pair_hamiltonian(flipped, z1, -z2, form);
  return sum / 4.0;
}

}  // namespace spincav
