#include "spincav/cavity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spincav {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

double photon_energy(double wavelength) {
  return kHbar * 2.0 * kPi * kSpeedOfLight / wavelength;
}

}  // namespace

double PhysicalParams::photon_rate_value() const {
  if (photon_rate) return *photon_rate;
  if (input_power) {
    if (!wavelength)
      throw std::invalid_argument("power given in watts requires the wavelength");
    return *input_power / photon_energy(*wavelength);
  }
  throw std::invalid_argument("no drive given: set photon_rate or input_power");
}

double PhysicalParams::input_power_value() const {
  if (input_power) return *input_power;
  if (photon_rate) {
    if (!wavelength)
      throw std::invalid_argument("photon rate to watts requires the wavelength");
    return *photon_rate * photon_energy(*wavelength);
  }
  throw std::invalid_argument("no drive given: set photon_rate or input_power");
}

std::vector<std::string> PhysicalParams::validate() const {
  if (mirror_transmissivity <= 0 || mirror_transmissivity >= 1)
    throw std::invalid_argument("mirror transmissivity must lie in (0,1)");
  if (beam_splitter_transmissivity <= 0 || beam_splitter_transmissivity >= 1)
    throw std::invalid_argument("beam splitter transmissivity must lie in (0,1)");
  if (roundtrip_loss < 0 || roundtrip_loss >= 1)
    throw std::invalid_argument("round-trip loss must lie in [0,1)");

  std::vector<std::string> warnings;
  if (roundtrip_loss >= mirror_transmissivity / 10)
    warnings.push_back("round-trip loss is not small against T (eps >= T/10)");
  if (!photon_rate && !input_power)
    warnings.push_back("no drive given; coefficient outputs will be unavailable");
  return warnings;
}

double phase_per_atom(const PhysicalParams& params) {
  const double lw = params.wavelength_ratio;
  return 6.0 / (kPi * kPi) * lw * lw * params.linewidth_ratio;
}

std::complex<double> cavity_reflection(double alpha, double transmissivity, double loss) {
  // (sqrt(eta) e^{ia} - r) / (1 - sqrt(eta) r e^{ia}), rearranged so the
  // near-resonance differences sqrt(eta)-r and 1-sqrt(eta)r are formed
  // without cancellation (they are O(T) against O(1) terms).
  const double r = std::sqrt(1.0 - transmissivity);
  const double se = std::sqrt(1.0 - loss);
  const double s2 = std::sin(alpha / 2);
  const std::complex<double> expm1{-2.0 * s2 * s2, std::sin(alpha)};  // e^{ia} - 1
  const std::complex<double> num =
      (transmissivity - loss) / (se + r) + se * expm1;
  const std::complex<double> den =
      (transmissivity + loss - loss * transmissivity) / (1.0 + se * r) - se * r * expm1;
  return num / den;
}

CavityBuildup cavity_buildup(double alpha, double transmissivity, double loss) {
  const double t = transmissivity;
  const double u = 2.0 * alpha / (loss + t);
  CavityBuildup out;
  out.lorentzian = 4.0 / t / ((1.0 + loss / t) * (1.0 + loss / t)) / (1.0 + u * u);
  const double r = std::sqrt(1.0 - t);
  const double se = std::sqrt(1.0 - loss);
  out.exact = t / std::norm(1.0 - se * r * std::exp(kI * alpha));
  return out;
}

CavityResponse cavity_response(double alpha, double transmissivity, double loss) {
  return CavityResponse{cavity_reflection(alpha, transmissivity, loss),
                        cavity_buildup(alpha, transmissivity, loss)};
}

double ac_stark_shift_from_rate(const PhysicalParams& params, double circulating_photon_rate) {
  const double lw = params.wavelength_ratio;
  return 24.0 / (kPi * kPi) * lw * lw * params.linewidth_ratio * circulating_photon_rate;
}

double ac_stark_shift(const PhysicalParams& params, double circulating_power_watts) {
  if (!params.wavelength)
    throw std::invalid_argument("ac Stark shift from watts requires the wavelength");
  return ac_stark_shift_from_rate(params,
                                  circulating_power_watts / photon_energy(*params.wavelength));
}

double stark_linear_coefficient(const PhysicalParams& params, double circulating_power_watts) {
  return 2.0 * ac_stark_shift(params, circulating_power_watts);
}

double single_cavity_hamiltonian(const PhysicalParams& params, double z) {
  const double t = params.mirror_transmissivity;
  const double lw = params.wavelength_ratio;
  const double alpha = 2.0 * (params.cavity_length * params.detuning + phase_per_atom(params) * z);
  const double u = 2.0 * alpha / t;
  return 24.0 / (kPi * kPi * t) / (1.0 + u * u) * lw * lw * params.linewidth_ratio * z *
         params.photon_rate_value();
}

HamiltonianCoeffs single_cavity_coeffs(const PhysicalParams& params, double max_abs_z) {
  const double t = params.mirror_transmissivity;
  const double lw = params.wavelength_ratio;
  const double gd = params.linewidth_ratio;
  const double rate = params.photon_rate_value();
  const double beta = 4.0 * params.cavity_length * params.detuning / t;
  const double lorentz = 1.0 + beta * beta;

  HamiltonianCoeffs out;
  out.omega = 24.0 / (kPi * kPi * t) / lorentz * lw * lw * gd * rate;
  out.chi = -(128.0 * 9.0) / (kPi * kPi * kPi * kPi) / (t * t) * beta / (lorentz * lorentz) *
            std::pow(lw, 4) * gd * gd * rate;

  // |Dk| >> delta_phi |Z| / L, with ">>" pinned at a factor of ten.
  const double needed = 10.0 * std::abs(phase_per_atom(params)) * max_abs_z;
  const double have = std::abs(params.cavity_length * params.detuning);
  out.validity_margin = needed > 0 ? have / needed : std::numeric_limits<double>::infinity();
  out.linearization_valid = out.validity_margin >= 1.0;
  return out;
}

double absorption_epsilon(double atom_count, const PhysicalParams& params, bool antinodes) {
  const double lw = params.wavelength_ratio;
  const double gd = params.linewidth_ratio;
  double eps = 3.0 / (kPi * kPi) * atom_count * lw * lw * gd * gd;
  return antinodes ? 2.0 * eps : eps;
}

}  // namespace spincav
