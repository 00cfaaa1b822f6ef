#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spincav/michelson.hpp"
#include "spincav/network.hpp"

using namespace spincav;

namespace {
constexpr double kPi = std::numbers::pi;

PhysicalParams base_params() {
  PhysicalParams p;
  p.wavelength_ratio = 1e-2;
  p.linewidth_ratio = 6.06e6 / 3.4e9;
  p.mirror_transmissivity = 5e-3;
  p.roundtrip_loss = 1.2e-6;
  p.cavity_length = 26e-3;
  p.beam_splitter_transmissivity = 0.5;
  p.photon_rate = 4.7119331101070677e10;
  return p;
}
}  // namespace

TEST_CASE("network solver reproduces the Michelson closed forms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  double worst = 0, worst_residual = 0;
  for (int draw = 0; draw < 50; ++draw) {
    auto p = testing::random_params(rng);
    const double phi[2] = {phase(rng), phase(rng)};
    const auto spec = build_michelson_spec(p);
    const auto sol = solve_steady_state(spec, phi);
    const auto closed = michelson_amplitudes(p, phi[0], phi[1]);
    worst = std::max({worst, std::abs(sol.cavity_incident[0] - closed.a),
                      std::abs(sol.cavity_incident[1] - closed.c),
                      std::abs(sol.port_out(0, 0) - closed.d),
                      std::abs(sol.port_out(0, 2) - closed.b)});
    worst_residual = std::max(worst_residual, sol.residual);
  }
  MESSAGE("network vs closed forms: ", worst, ", residual: ", worst_residual);
  CHECK(worst < 1e-10);
  CHECK(worst_residual < 1e-10);
}

TEST_CASE("lossless networks conserve power") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  for (int draw = 0; draw < 30; ++draw) {
    auto p = testing::random_params(rng);
    p.roundtrip_loss = 0.0;
    const double phi[2] = {phase(rng), phase(rng)};
    const auto sol = solve_steady_state(build_michelson_spec(p), phi);
    CHECK(std::abs(sol.output_power - 1.0) < 1e-10);
  }

  FiveCavityConfig config;
  config.params = base_params();
  config.params.roundtrip_loss = 0.0;
  const double detunings[5] = {0.02 * 5e-3, 0.02 * 5e-3, 0.05, 0.05, 0.05};
  const double arms[5] = {0, 0, 0.3, -0.2, 0.1};
  const auto spec = build_five_cavity_spec(config, detunings, arms, kPi / 4);
  const double phi5[5] = {1e-4, -2e-4, 3e-4, 0, -1e-4};
  const auto sol = solve_steady_state(spec, phi5);
  CHECK(std::abs(sol.output_power - 1.0) < 1e-10);
  CHECK(sol.residual < 1e-10);
}

TEST_CASE("degenerate network: one cavity behind a nearly transparent splitter") {
  auto p = base_params();
  p.detuning = 0.1 * p.mirror_transmissivity / (2 * p.cavity_length);

  using EP = NetworkSpec::Endpoint;
  NetworkSpec spec;
  spec.nodes.push_back({"relay", 1.0 - 1e-12});
  spec.cavities.push_back({p.mirror_transmissivity, p.roundtrip_loss, p.cavity_length,
                           p.detuning, 0});
  spec.edges.push_back({EP::at_port(0, 0), EP::input(), 0.0});
  spec.edges.push_back({EP::at_port(0, 2), EP::at_cavity(0), 0.0});
  spec.edges.push_back({EP::at_port(0, 1), EP::open(), 0.0});
  spec.edges.push_back({EP::at_port(0, 3), EP::open(), 0.0});

  const double phi[1] = {2e-4};
  const auto sol = solve_steady_state(spec, phi);
  const double alpha = phi[0] + 2 * p.cavity_length * p.detuning;
  const auto f = cavity_reflection(alpha, p.mirror_transmissivity, p.roundtrip_loss);
  const auto buildup = cavity_buildup(alpha, p.mirror_transmissivity, p.roundtrip_loss);
  CHECK(std::abs(sol.port_out(0, 0) - f) < 1e-9);
  CHECK(sol.cavity_power[0] == doctest::Approx(buildup.exact).epsilon(1e-9));
}

TEST_CASE("spec validation") {
  auto p = base_params();
  auto spec = build_michelson_spec(p);
  CHECK_NOTHROW(spec.validate());

  SUBCASE("dangling port") {
    spec.edges.pop_back();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("missing input") {
    spec.edges[0].b = NetworkSpec::Endpoint::open();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("two inputs") {
    spec.edges[2].b = NetworkSpec::Endpoint::input();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("bad splitter transmissivity") {
    spec.nodes[0].transmissivity = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
}

TEST_CASE("singular lossless on-resonance loop is reported") {
  auto p = base_params();
  p.roundtrip_loss = 0.0;
  p.detuning = 0.0;
  const auto spec = build_michelson_spec(p);
  const double phi[2] = {0.0, 0.0};
  CHECK_THROWS_AS(solve_steady_state(spec, phi), std::runtime_error);
}

TEST_CASE("effective Hamiltonian fit on the Michelson instance") {
  auto p = base_params();
  // Small detuning keeps the interior buildup flat, which is where the
  // closed-form pair coefficients apply.
  p.detuning = 0.01 * p.mirror_transmissivity / p.cavity_length;
  const auto spec = build_michelson_spec(p);

  std::vector<std::vector<double>> grid;
  for (int i = -2; i <= 2; ++i)
    for (int k = -2; k <= 2; ++k) grid.push_back({25.0 * i, 25.0 * k});
  const auto fit = effective_classical_hamiltonian(spec, grid, p);
  const auto coeffs = pair_coeffs(p);
  const double tb = p.beam_splitter_transmissivity;

  CHECK(fit.omega(0) == doctest::Approx(coeffs.omega).epsilon(0.02));
  CHECK(fit.omega(1) == doctest::Approx(tb * coeffs.omega).epsilon(0.02));
  CHECK(fit.chi(0, 1) == doctest::Approx(-coeffs.chi).epsilon(0.02));  // symmetric half of -2chi
  CHECK(fit.chi(0, 0) == doctest::Approx(coeffs.chi).epsilon(0.05));
  CHECK(fit.chi(1, 0) == fit.chi(0, 1));

  SUBCASE("swapping the cavity mode labels permutes the fit") {
    auto swapped = spec;
    swapped.cavities[0].mode = 1;
    swapped.cavities[1].mode = 0;
    const auto fit2 = effective_classical_hamiltonian(swapped, grid, p);
    CHECK(fit2.omega(1) == doctest::Approx(fit.omega(0)).epsilon(1e-9));
    CHECK(fit2.omega(0) == doctest::Approx(fit.omega(1)).epsilon(1e-9));
    CHECK(fit2.chi(0, 1) == doctest::Approx(fit.chi(0, 1)).epsilon(1e-9));
  }
  SUBCASE("far off-resonance kills the couplings") {
    auto far = p;
    far.detuning = 10 * p.mirror_transmissivity / (2 * p.cavity_length);
    const auto fit_far = effective_classical_hamiltonian(build_michelson_spec(far), grid, far);
    CHECK(std::abs(fit_far.chi(0, 1)) < 1e-3 * std::abs(fit.chi(0, 1)));
  }
  SUBCASE("underdetermined grids are rejected") {
    CHECK_THROWS_AS(effective_classical_hamiltonian(spec, {{0.0, 0.0}}, p),
                    std::invalid_argument);
  }
}

TEST_CASE("five-cavity pair selectivity for a sample of targets") {
  FiveCavityConfig config;
  config.params = base_params();
  for (auto [j, k] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{2, 3}}) {
    const auto report = pair_selectivity_report(config, j, k);
    MESSAGE("pair (", j, ",", k, "): ratio ", report.ratio, ", chi_jk ", report.target_chi);
    CHECK(report.pass);
    CHECK(report.ratio < 0.1);
    CHECK(std::abs(report.target_chi) > 0);
  }
}

TEST_CASE("all five near resonance is flagged non-selective") {
  FiveCavityConfig config;
  config.params = base_params();
  const double t = config.params.mirror_transmissivity;
  // Hold every cavity near resonance: no suppression mechanism engaged.
  std::vector<double> detunings(5, 0.02 * t), arms(5, 0.0);
  const auto spec = build_five_cavity_spec(config, detunings, arms, kPi / 2);
  const auto fit =
      effective_classical_hamiltonian(spec, symmetric_grid(5, 50.0), config.params);
  double target = std::abs(fit.chi(0, 1));
  double off = 0;
  for (int m = 0; m < 5; ++m)
    for (int n = m; n < 5; ++n) {
      if ((m == 0 && n == 1) || m == n) continue;
      off = std::max(off, std::abs(fit.chi(m, n)));
    }
  CHECK(off > 0.1 * target);  // no PASS claim possible
}
