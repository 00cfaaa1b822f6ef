#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spincav/michelson.hpp"
#include "spincav/result_table.hpp"

// Experiment drivers behind the CLI. Each run consumes a config struct,
// evaluates grids (in parallel where they are embarrassingly so, assembled in
// order), and returns tables whose metadata echoes the configuration and
// flags every assumed parameter.

namespace spincav {

/// The standard Rb numbers used throughout: Gamma = 2pi x 6.06 MHz,
/// Delta = 2pi x 3.4 GHz, lambda = 780 nm.
PhysicalParams rubidium_defaults();

struct Fig2Config {
  PhysicalParams params;            // defaults to the figure's caption values
  double z_extent = 3000;           // grid covers [-z_extent, z_extent]
  int grid_points = 61;             // per axis, power map
  int inset_points = 61;            // Z1 samples per inset line
  int inset_lines = 9;              // equidistant Z2 values
  std::vector<double> ldk_over_t{0.08, 0.5};

  Fig2Config();
};

struct Fig2Result {
  std::vector<ResultTable> power_grids;  // one per L Dk value
  std::vector<ResultTable> insets;       // four-step Hamiltonian lines
};

Fig2Result run_fig2(const Fig2Config& config);

/// Largest |residual| of per-line linear fits divided by the inset's full
/// range; the figure's structural linearity measure.
double inset_linearity_residual(const ResultTable& inset);

struct OverlapConfig {
  std::vector<int> atom_counts{50, 100, 200, 500};
  std::vector<double> xis{2, 4, 6};
  double start_time_scale = 0.02;  // first step is scale/N
  double time_growth = 1.25;       // multiplicative time marching
  double max_r = 0.98;
  int max_steps = 64;
};

/// Columns: N, xi, t, r, delta_n_plus, delta_n_minus, phi_rad, overlap, flat.
ResultTable run_overlap_study(const OverlapConfig& config);

struct InfoContentReport {
  double atom_count = 0;
  double r = 0;
  double states = 0;           // r^2 N
  double qubits = 0;           // log2(r^2 N)
  double squeezing_db = 0;     // 10 log10(dn_minus^2 / (N/4))
  double n_bits = 0;           // -Sq / (10 log10 2)
  double total_qubits = 0;     // log2(N+1)
  bool sub_single_state = false;  // r^2 N < 1

  nlohmann::json to_json() const;
};

/// Exactly one of (n together with r) or (sq_db, optionally with n).
InfoContentReport run_info_content(std::optional<double> atom_count, std::optional<double> r,
                                   std::optional<double> squeezing_db);

struct SqueezeConfig {
  int atom_count = 100;
  bool tact = false;      // one-axis twisting otherwise
  int time_points = 200;
  double max_time = 0;    // 0: protocol-dependent default
};

/// Columns: t, min_transverse_variance, squeezing_db.
ResultTable run_squeeze_protocols(const SqueezeConfig& config);

struct CompilerVerificationConfig {
  std::vector<int> identity_atom_counts{1, 6, 10, 20, 40};
  int two_mode_atoms = 6;
  int gadget_atoms = 6;
  std::vector<double> gadget_dts{1e-3, 3.162e-3, 1e-2, 3.162e-2, 1e-1};
  int trotter_atoms = 4;
  std::vector<int> trotter_reps{4, 8, 16, 32};
  int qnd_atoms = 10;
  std::vector<double> qnd_chi_tau{1e-4, 1e-3, 1e-2};
  unsigned seed = 42;
};

struct CompilerVerification {
  ResultTable identities;   // N, residual per equation
  ResultTable convergence;  // study, x, error
  ResultTable qnd;          // chi_tau, min fidelity
  double gadget_slope = 0;
  double trotter_slope = 0;
};

CompilerVerification run_compiler_verification(const CompilerVerificationConfig& config);

/// Ordered parallel map over [0, count) used by the grid sweeps.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace spincav
