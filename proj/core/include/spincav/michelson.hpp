#pragma once

#include "spincav/cavity.hpp"

// Two-cavity Michelson algebra: closed-form output amplitudes and
// intensities, the resonance-point loss estimate, the intracavity power in
// its three fidelity tiers, and the pair Hamiltonian coefficients.
//
// Path-length conventions are the resonant ones fixed in the derivation:
// round-trip phase factors +1 for the two cavity arms and -1 for the mirror
// arm, with the atomic phases entering through alpha_{1,2} = phi_{1,2} + 2 L Dk.
// Cavity 1 sits in arm a, cavity 2 in arm c; phi_j = 2 delta_phi Z_j.

namespace spincav {

struct MichelsonAmplitudes {
  std::complex<double> a, b, c, d;    // four beam-splitter outputs, unit input
  std::complex<double> f_a, f_c;      // cavity reflections used
};

MichelsonAmplitudes michelson_amplitudes(const PhysicalParams& params, double phi1, double phi2);

struct MichelsonIntensities {
  double a2 = 0, b2 = 0, c2 = 0, d2 = 0;
  double j = 0;  // common denominator
};

/// Intensity closed forms; equal to the squared moduli of the amplitudes.
MichelsonIntensities michelson_intensities(const PhysicalParams& params, double phi1, double phi2);

struct LossEstimate {
  double estimate = 0;  // 1 - 4 (1-T_B)/(1+T_B) eps/T
  double exact = 0;     // |d|^2 evaluated at the expansion point alpha1=alpha2=0
};

LossEstimate michelson_loss_estimate(double beam_splitter_transmissivity, double loss,
                                     double transmissivity);

/// Fidelity tiers of the intracavity power formulas.
enum class PowerForm {
  lorentzian,      // full form, loss floor eps^2 kept
  large_detuning,  // |Dk| >> eps/(2L)
  linearized,      // additionally |phi| << L|Dk|
};

struct PowerRatios {
  double p1 = 0, p2 = 0;           // in units of the input power P0
  bool linearization_valid = true; // only meaningful for the linearized tier
};

/// P_1, P_2 relative to P0, using P_cav ~ (4/T) P_arm (phases swept well
/// inside the cavity line).
PowerRatios intracavity_power_ratios(const PhysicalParams& params, double z1, double z2,
                                     PowerForm form);

struct IntracavityPowers {
  double p1 = 0, p2 = 0;  // watts
  bool linearization_valid = true;
};

IntracavityPowers intracavity_powers(const PhysicalParams& params, double z1, double z2,
                                     PowerForm form);

/// H(Z1,Z2)/hbar in rad/s: 2[omega_ac(P1) Z1 + omega_ac(P2) Z2] with the
/// selected power tier.
double pair_hamiltonian(const PhysicalParams& params, double z1, double z2, PowerForm form);

/// Linearized pair coefficients: H = hbar[omega(Z1 + T_B Z2) + chi(Z1-Z2)^2].
/// Validity: |Dk| >= 10 eps/(2L).
HamiltonianCoeffs pair_coeffs(const PhysicalParams& params);

/// Classical four-step composition: average of H(+-Z1, +-Z2; +-Dk) over the
/// sign pattern that cancels the linear and single-mode quadratic terms.
/// Equals -2 chi Z1 Z2 in the linearized tier.
double four_step_hamiltonian(const PhysicalParams& params, double z1, double z2, PowerForm form);

}  // namespace spincav
