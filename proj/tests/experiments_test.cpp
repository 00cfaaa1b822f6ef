#include "doctest.h"
#include "spincav/experiments.hpp"

using namespace spincav;

TEST_CASE("information content worked numbers") {
  SUBCASE("N = 6000, r = 0.05") {
    const auto report = run_info_content(6000.0, 0.05, std::nullopt);
    CHECK(report.states == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(report.qubits == doctest::Approx(3.9068905956085185).epsilon(1e-12));
    CHECK(report.squeezing_db == doctest::Approx(-11.760912590556812).epsilon(1e-12));
    CHECK(report.total_qubits == doctest::Approx(std::log2(6001.0)).epsilon(1e-12));
    CHECK_FALSE(report.sub_single_state);
  }
  SUBCASE("Sq = -20 dB in a 5e5 sample") {
    const auto report = run_info_content(5e5, std::nullopt, -20.0);
    CHECK(report.n_bits == doctest::Approx(6.6438561897747247).epsilon(1e-12));
    CHECK(report.r == doctest::Approx(0.014142135623730950).epsilon(1e-12));
    CHECK(report.states == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(report.total_qubits == doctest::Approx(18.931568569324174).epsilon(1e-6));
  }
  SUBCASE("Sq = 0 carries no qubits") {
    CHECK(run_info_content(std::nullopt, std::nullopt, 0.0).n_bits == 0.0);
  }
  SUBCASE("sub-single-state flag") {
    CHECK(run_info_content(100.0, 0.05, std::nullopt).sub_single_state);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(run_info_content(100.0, 0.05, -10.0), std::invalid_argument);
    CHECK_THROWS_AS(run_info_content(100.0, std::nullopt, std::nullopt),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_info_content(std::nullopt, 0.05, std::nullopt), std::invalid_argument);
  }
}

TEST_CASE("fig2 reproduction, reduced grid") {
  Fig2Config config;
  config.grid_points = 21;
  config.inset_points = 31;
  const auto result = run_fig2(config);
  REQUIRE(result.insets.size() == 2);
  REQUIRE(result.power_grids.size() == 2);

  // Baseline consistency at Z1 = Z2 = 0 against the closed form.
  PhysicalParams p = config.params;
  p.detuning = config.ldk_over_t[0] * p.mirror_transmissivity / p.cavity_length;
  const auto powers = intracavity_powers(p, 0, 0, PowerForm::lorentzian);
  double center_power = -1;
  for (const auto& row : result.power_grids[0].rows)
    if (row[0] == 0 && row[1] == 0) center_power = row[2];
  CHECK(center_power == doctest::Approx(powers.p1).epsilon(1e-12));

  const double res_008 = inset_linearity_residual(result.insets[0]);
  const double res_05 = inset_linearity_residual(result.insets[1]);
  MESSAGE("inset linearity residuals: 0.08T -> ", res_008, ", 0.5T -> ", res_05);
  CHECK(res_05 < 0.05);
  CHECK(res_008 > 2 * res_05);

  // Every assumed parameter appears in the metadata.
  const auto& meta = result.insets[0].metadata;
  CHECK(meta.contains("assumed_not_from_caption"));
  CHECK(meta["params"].contains("beam_splitter_transmissivity"));
}

TEST_CASE("overlap study structure and flat-space limit") {
  OverlapConfig config;
  config.atom_counts = {200};
  const auto table = run_overlap_study(config);
  REQUIRE(table.columns.size() == 9);
  REQUIRE(!table.rows.empty());

  double max_r = 0;
  int small_r_rows = 0;
  for (const auto& row : table.rows) {
    const double xi = row[1], r = row[3], overlap = row[7], flat = row[8];
    max_r = std::max(max_r, r);
    CHECK(flat == doctest::Approx(std::exp(-xi * xi / 4)).epsilon(1e-12));
    if (r <= 0.08) {
      ++small_r_rows;
      CHECK(std::abs(overlap - flat) < 0.02);
    }
  }
  CHECK(small_r_rows > 0);
  CHECK(max_r > 0.78);  // the TACT stretch saturates just above 0.8

  SUBCASE("xi = 0 keeps unit overlap at every r") {
    OverlapConfig zero;
    zero.atom_counts = {100};
    zero.xis = {0.0};
    for (const auto& row : run_overlap_study(zero).rows)
      CHECK(row[7] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("identical configs give identical tables") {
    const auto again = run_overlap_study(config);
    CHECK(again.to_csv() == table.to_csv());
  }
}

TEST_CASE("squeezing protocols") {
  SqueezeConfig oat;
  oat.atom_count = 60;
  oat.time_points = 120;
  const auto oat_table = run_squeeze_protocols(oat);
  CHECK(oat_table.rows.front()[2] == doctest::Approx(0.0).epsilon(1e-9));  // t=0: 0 dB

  double oat_min_db = 0, oat_min_t = 0;
  for (const auto& row : oat_table.rows)
    if (row[2] < oat_min_db) {
      oat_min_db = row[2];
      oat_min_t = row[0];
    }
  MESSAGE("OAT minimum: ", oat_min_db, " dB at t = ", oat_min_t);
  CHECK(oat_min_db < 0.0);
  CHECK(oat_min_t > 0.0);

  SqueezeConfig tact = oat;
  tact.tact = true;
  const auto tact_table = run_squeeze_protocols(tact);
  double tact_min_db = 0;
  for (const auto& row : tact_table.rows) tact_min_db = std::min(tact_min_db, row[2]);
  MESSAGE("TACT minimum: ", tact_min_db, " dB");
  CHECK(tact_min_db < oat_min_db);
}

TEST_CASE("compiler verification battery") {
  CompilerVerificationConfig config;
  config.identity_atom_counts = {1, 6, 10};
  config.gadget_dts = {1e-2, 3.162e-2, 1e-1};
  config.trotter_reps = {4, 8, 16};
  config.qnd_atoms = 6;
  config.qnd_chi_tau = {1e-3};
  const auto v = run_compiler_verification(config);

  for (const auto& row : v.identities.rows) {
    CHECK(row[1] < 1e-10);
    if (row[2] >= 0) CHECK(row[2] < 1e-10);
  }
  CHECK(v.gadget_slope == doctest::Approx(3.0).epsilon(0.07));
  CHECK(v.trotter_slope == doctest::Approx(-2.0).epsilon(0.1));
  for (const auto& row : v.qnd.rows) CHECK(row[1] > 1 - 1e-9);
}
