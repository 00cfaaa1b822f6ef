#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

// Closed-form classical optics of a driven two-mirror cavity with dispersive
// atoms: per-atom phase shift, input-output relation, field buildup, ac-Stark
// shift, the linearized single-cavity Hamiltonian coefficients, and the
// round-trip absorption budget. Everything is written in the dimensionless
// groups (lambda/w, Gamma/Delta, eps/T, L*Dk); SI units enter only through
// the power <-> photon-rate conversion.

namespace spincav {

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s

struct PhysicalParams {
  double wavelength_ratio = 0;         // lambda/w
  double linewidth_ratio = 0;          // Gamma/Delta, signed by detuning side
  double mirror_transmissivity = 0;    // T
  double roundtrip_loss = 0;           // eps
  double cavity_length = 0;            // L [m]
  double detuning = 0;                 // Dk [1/m], signed
  double beam_splitter_transmissivity = 0.5;  // T_B; R_B = 1 - T_B

  std::optional<double> photon_rate;   // photons/s
  std::optional<double> input_power;   // W (needs wavelength to convert)
  std::optional<double> wavelength;    // m

  /// Incoming photon rate, converting from power when necessary.
  double photon_rate_value() const;
  /// Incoming power in watts, converting from the photon rate when necessary.
  double input_power_value() const;

  /// Soft checks (eps << T as eps < T/10, drive present, ...). Hard
  /// violations such as T or T_B outside (0,1) throw instead.
  std::vector<std::string> validate() const;
};

/// delta_phi = (6/pi^2) (lambda/w)^2 (Gamma/Delta), radians per round trip.
double phase_per_atom(const PhysicalParams& params);

/// Reflection amplitude (sqrt(eta) e^{ia} - r) / (1 - sqrt(eta) r e^{ia}),
/// r = sqrt(1-T), eta = 1-eps.
std::complex<double> cavity_reflection(double alpha, double transmissivity, double loss);

struct CavityBuildup {
  double lorentzian = 0;  // (4/T)(1+eps/T)^-2 [1+(2a/(eps+T))^2]^-1
  double exact = 0;       // |c/a_in|^2 from the unapproximated geometric sum
};

/// Intracavity intensity ratio E_cav^2 / E_in^2 at the anti-nodes.
CavityBuildup cavity_buildup(double alpha, double transmissivity, double loss);

struct CavityResponse {
  std::complex<double> reflection;  // |reflection| <= 1
  CavityBuildup buildup;            // both branches >= 0
};

CavityResponse cavity_response(double alpha, double transmissivity, double loss);

/// omega_ac = (24/pi^2)(lambda/w)^2 (Gamma/Delta) P/(hbar omega0), rad/s.
/// Requires params.wavelength to convert the circulating power.
double ac_stark_shift(const PhysicalParams& params, double circulating_power_watts);

/// Same formula with the circulating photon rate given directly.
double ac_stark_shift_from_rate(const PhysicalParams& params, double circulating_photon_rate);

/// Coefficient of Z in H = 2 hbar omega_ac Z (rad/s), i.e. 2 omega_ac.
double stark_linear_coefficient(const PhysicalParams& params, double circulating_power_watts);

struct HamiltonianCoeffs {
  double omega = 0;  // rad/s
  double chi = 0;    // rad/s
  bool linearization_valid = true;
  double validity_margin = 0;  // how far inside the stated regime we are
};

/// Exact H(Z)/hbar of the driven cavity (rad/s), quadratic only after
/// linearization. alpha = 2(L Dk + delta_phi Z).
double single_cavity_hamiltonian(const PhysicalParams& params, double z);

/// Linearized coefficients: H = hbar(omega Z + chi Z^2). The validity flag
/// checks |Dk| >= 10 delta_phi max|Z| / L when a Z range is supplied.
HamiltonianCoeffs single_cavity_coeffs(const PhysicalParams& params, double max_abs_z = 0);

/// eps ~ (3/pi^2) N (lambda/w)^2 (Gamma/Delta)^2, doubled at the anti-nodes.
double absorption_epsilon(double atom_count, const PhysicalParams& params, bool antinodes);

}  // namespace spincav
