#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spincav/cavity.hpp"

using namespace spincav;

namespace {
PhysicalParams reference_params() {
  PhysicalParams p;
  p.wavelength_ratio = 1e-2;
  p.linewidth_ratio = 1.782e-3;
  p.mirror_transmissivity = 5e-3;
  p.roundtrip_loss = 1.2e-6;
  p.cavity_length = 26e-3;
  p.beam_splitter_transmissivity = 0.5;
  return p;
}
}  // namespace

TEST_CASE("phase per atom") {
  PhysicalParams p = reference_params();
  // (6/pi^2) 1e-4 * 1.782e-3, frozen from a 40-digit evaluation.
  CHECK(phase_per_atom(p) == doctest::Approx(1.0833260955038754e-7).epsilon(1e-14));

  p.linewidth_ratio = 0;
  CHECK(phase_per_atom(p) == 0.0);
  p.linewidth_ratio = -1.782e-3;
  CHECK(phase_per_atom(p) == doctest::Approx(-1.0833260955038754e-7).epsilon(1e-14));
}

TEST_CASE("cavity reflection") {
  SUBCASE("lossless unitarity") {
    for (double alpha : {0.0, 1e-4, 0.3, 2.0, -1.3}) {
      CHECK(std::abs(std::abs(cavity_reflection(alpha, 5e-3, 0.0)) - 1.0) < 1e-14);
    }
    CHECK(std::abs(cavity_reflection(0.0, 5e-3, 0.0) - 1.0) < 1e-14);
  }
  SUBCASE("first-order expansion 1 - 2 eps/T + i 4 alpha/T in its domain") {
    // The expansion needs eps/T and 4 alpha/T small; at eps/T = alpha/T = 0.01
    // the exact value agrees to ~1e-3 relative, and the error falls
    // quadratically with the expansion parameters.
    const double t = 5e-3;
    auto expansion_error = [&](double scale) {
      const double eps = scale * t, alpha = scale * t;
      const std::complex<double> exact = cavity_reflection(alpha, t, eps);
      const std::complex<double> first(1.0 - 2 * scale, 4 * scale);
      return std::abs(exact - first) / std::abs(exact);
    };
    CHECK(expansion_error(0.01) < 0.02);
    CHECK(expansion_error(0.01) / expansion_error(0.005) > 1.6);  // ~quadratic
  }
}

TEST_CASE("cavity buildup") {
  SUBCASE("on-resonance lossless peak is 4/T") {
    const auto b = cavity_buildup(0.0, 5e-3, 0.0);
    CHECK(b.lorentzian == doctest::Approx(800.0).epsilon(1e-14));
  }
  SUBCASE("half width at alpha = (eps+T)/2") {
    const double t = 5e-3, eps = 2e-4;
    const auto peak = cavity_buildup(0.0, t, eps);
    const auto half = cavity_buildup((eps + t) / 2, t, eps);
    CHECK(half.lorentzian == doctest::Approx(peak.lorentzian / 2).epsilon(1e-14));
  }
  SUBCASE("exact and Lorentzian forms agree within 1% for |alpha| <= T") {
    const double t = 5e-3, eps = 1.2e-6;
    double worst = 0;
    for (int k = 0; k <= 200; ++k) {
      const double alpha = -t + 2 * t * k / 200.0;
      const auto b = cavity_buildup(alpha, t, eps);
      worst = std::max(worst, std::abs(b.exact - b.lorentzian) / b.lorentzian);
    }
    MESSAGE("buildup exact-vs-Lorentzian worst relative deviation: ", worst);
    CHECK(worst < 0.01);
  }
}

TEST_CASE("cavity response invariants over random parameters") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int draw = 0; draw < 200; ++draw) {
    const double t = std::pow(10.0, -3 + 2.5 * uni(rng));
    const double eps = uni(rng) * t;  // includes the eps ~ T edge
    const double alpha = (uni(rng) - 0.5) * 6.0;
    const auto resp = cavity_response(alpha, t, eps);
    CHECK(std::abs(resp.reflection) <= 1.0 + 1e-12);
    CHECK(resp.buildup.lorentzian >= 0.0);
    CHECK(resp.buildup.exact >= 0.0);
  }
}

TEST_CASE("ac Stark shift") {
  PhysicalParams p = reference_params();
  CHECK(ac_stark_shift_from_rate(p, 0.0) == 0.0);
  CHECK(ac_stark_shift_from_rate(p, 2e9) ==
        doctest::Approx(2 * ac_stark_shift_from_rate(p, 1e9)).epsilon(1e-15));
  // (24/pi^2) 1e-4 * 1.782e-3 * 1e10, frozen from a 40-digit evaluation.
  CHECK(ac_stark_shift_from_rate(p, 1e10) == doctest::Approx(4333.3043820155018).epsilon(1e-14));

  CHECK_THROWS_AS(ac_stark_shift(p, 1e-9), std::invalid_argument);  // no wavelength
  p.wavelength = 780e-9;
  CHECK(ac_stark_shift(p, 1e-9) > 0);
  CHECK(stark_linear_coefficient(p, 1e-9) ==
        doctest::Approx(2 * ac_stark_shift(p, 1e-9)).epsilon(1e-15));
}

TEST_CASE("single cavity coefficients") {
  PhysicalParams p = reference_params();
  p.detuning = p.mirror_transmissivity / (4 * p.cavity_length);  // 4 L Dk / T = 1
  p.photon_rate = 4.7119331101070677e10;

  SUBCASE("detuning sign flips chi only") {
    const auto plus = single_cavity_coeffs(p);
    PhysicalParams q = p;
    q.detuning = -p.detuning;
    const auto minus = single_cavity_coeffs(q);
    CHECK(minus.chi == doctest::Approx(-plus.chi).epsilon(1e-15));
    CHECK(minus.omega == doctest::Approx(plus.omega).epsilon(1e-15));
    CHECK(plus.chi < 0);  // sign(chi) = -sign(Dk)
  }
  SUBCASE("no drive, no Hamiltonian") {
    PhysicalParams q = p;
    q.photon_rate = 0.0;
    const auto c = single_cavity_coeffs(q);
    CHECK(c.omega == 0.0);
    CHECK(c.chi == 0.0);
  }
  SUBCASE("quadratic fit of the exact H(Z) recovers the closed forms") {
    const int n = 100;  // delta_phi N <= 0.01 L |Dk| holds here
    CHECK(phase_per_atom(p) * n <= 0.01 * p.cavity_length * std::abs(p.detuning));
    std::vector<double> z, z2, h;
    for (int k = 0; k <= 40; ++k) {
      const double zz = -n / 2.0 + n * k / 40.0;
      z.push_back(zz);
      z2.push_back(zz * zz);
      h.push_back(single_cavity_hamiltonian(p, zz));
    }
    const auto fit = testing::least_squares({z, z2}, h);
    const auto coeffs = single_cavity_coeffs(p, n / 2.0);
    CHECK(coeffs.linearization_valid);
    CHECK(fit(0) == doctest::Approx(coeffs.omega).epsilon(0.01));
    CHECK(fit(1) == doctest::Approx(coeffs.chi).epsilon(0.01));
  }
  SUBCASE("validity flag reacts to the Z range") {
    const auto tight = single_cavity_coeffs(p, 1e9);
    CHECK_FALSE(tight.linearization_valid);
  }
}

TEST_CASE("absorption epsilon") {
  PhysicalParams p;
  p.wavelength_ratio = 780e-9 / 100e-6;
  p.linewidth_ratio = 6.06e6 / 3.4e9;
  CHECK(absorption_epsilon(0, p, true) == 0.0);
  const double eps = absorption_epsilon(1e4, p, true);
  // Frozen from a 40-digit evaluation of the doubled formula.
  CHECK(eps == doctest::Approx(1.1749736429944767e-6).epsilon(1e-12));
  CHECK(eps > 1.0e-6);
  CHECK(eps < 1.6e-6);
  CHECK(absorption_epsilon(1e4, p, false) == doctest::Approx(eps / 2).epsilon(1e-15));
}

TEST_CASE("parameter validation and unit conversion") {
  PhysicalParams p = reference_params();
  CHECK(p.validate().size() == 1);  // no drive warning
  p.photon_rate = 1e10;
  CHECK(p.validate().empty());
  p.roundtrip_loss = p.mirror_transmissivity / 5;
  CHECK(p.validate().size() == 1);  // eps not << T

  PhysicalParams bad = reference_params();
  bad.mirror_transmissivity = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  PhysicalParams conv = reference_params();
  CHECK_THROWS_AS(conv.photon_rate_value(), std::invalid_argument);
  conv.input_power = 12e-9;
  CHECK_THROWS_AS(conv.photon_rate_value(), std::invalid_argument);  // needs wavelength
  conv.wavelength = 780e-9;
  // P0 = 12 nW at 780 nm, frozen from hbar = 1.054571817e-34, c = 299792458.
  CHECK(conv.photon_rate_value() == doctest::Approx(4.7119331101070677e10).epsilon(1e-12));
  PhysicalParams back = conv;
  back.input_power.reset();
  back.photon_rate = conv.photon_rate_value();
  CHECK(back.input_power_value() == doctest::Approx(12e-9).epsilon(1e-12));
}
