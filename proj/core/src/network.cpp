#include "spincav/network.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spincav {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

int out_index(int node, int port) { return 8 * node + port; }
int in_index(int node, int port) { return 8 * node + 4 + port; }

}  // namespace

int NetworkSpec::mode_count() const {
  int m = -1;
  for (const auto& cav : cavities) m = std::max(m, cav.mode);
  return m + 1;
}

void NetworkSpec::validate() const {
  std::vector<int> port_uses(nodes.size() * 4, 0);
  std::vector<int> cavity_uses(cavities.size(), 0);
  int inputs = 0;
  auto touch = [&](const Endpoint& e) {
    switch (e.kind) {
      case Endpoint::Kind::port:
        if (e.node < 0 || e.node >= static_cast<int>(nodes.size()) || e.port < 0 || e.port > 3)
          throw std::invalid_argument("edge references an unknown beam-splitter port");
        ++port_uses[static_cast<size_t>(4 * e.node + e.port)];
        break;
      case Endpoint::Kind::cavity:
        if (e.index < 0 || e.index >= static_cast<int>(cavities.size()))
          throw std::invalid_argument("edge references an unknown cavity");
        ++cavity_uses[static_cast<size_t>(e.index)];
        break;
      case Endpoint::Kind::input:
        ++inputs;
        break;
      default:
        break;
    }
  };
  for (const auto& edge : edges) {
    touch(edge.a);
    touch(edge.b);
    if (edge.a.kind != Endpoint::Kind::port && edge.b.kind != Endpoint::Kind::port)
      throw std::invalid_argument("every edge needs at least one beam-splitter port");
  }
  for (int use : port_uses)
    if (use != 1) throw std::invalid_argument("every beam-splitter port must connect exactly once");
  for (int use : cavity_uses)
    if (use != 1) throw std::invalid_argument("every cavity must terminate exactly one edge");
  if (inputs != 1) throw std::invalid_argument("exactly one input port is required");
  for (const auto& bs : nodes)
    if (bs.transmissivity <= 0 || bs.transmissivity >= 1)
      throw std::invalid_argument("beam-splitter transmissivity must lie in (0,1)");
}

NetworkSolution solve_steady_state(const NetworkSpec& spec, std::span<const double> atom_phases) {
  spec.validate();
  if (spec.mode_count() > static_cast<int>(atom_phases.size()))
    throw std::invalid_argument("atom phase vector shorter than the number of modes");

  const int n = 8 * static_cast<int>(spec.nodes.size());
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  int row = 0;

  // Scattering relations, 4 per splitter.
  for (int b = 0; b < static_cast<int>(spec.nodes.size()); ++b) {
    const double tb = std::sqrt(spec.nodes[b].transmissivity);
    const std::complex<double> irb = kI * std::sqrt(1.0 - spec.nodes[b].transmissivity);
    const int couple[4][2] = {{2, 3}, {3, 2}, {0, 1}, {1, 0}};  // transmit, reflect partners
    for (int p = 0; p < 4; ++p) {
      triplets.emplace_back(row, out_index(b, p), 1.0);
      triplets.emplace_back(row, in_index(b, couple[p][0]), -tb);
      triplets.emplace_back(row, in_index(b, couple[p][1]), -irb);
      ++row;
    }
  }

  std::vector<std::complex<double>> cavity_reflections(spec.cavities.size());
  for (size_t c = 0; c < spec.cavities.size(); ++c) {
    const auto& cav = spec.cavities[c];
    const double alpha = atom_phases[static_cast<size_t>(cav.mode)] + 2.0 * cav.length * cav.detuning;
    cavity_reflections[c] = cavity_reflection(alpha, cav.transmissivity, cav.loss);
  }

  std::vector<std::pair<int, int>> cavity_port(spec.cavities.size(), {-1, -1});
  std::vector<std::pair<int, int>> exit_ports;  // input + open ports
  for (const auto& edge : spec.edges) {
    const std::complex<double> oneway = std::exp(kI * edge.phase);
    auto a = edge.a, b = edge.b;
    if (a.kind != NetworkSpec::Endpoint::Kind::port) std::swap(a, b);
    if (b.kind == NetworkSpec::Endpoint::Kind::port) {
      triplets.emplace_back(row, in_index(b.node, b.port), 1.0);
      triplets.emplace_back(row, out_index(a.node, a.port), -oneway);
      ++row;
      triplets.emplace_back(row, in_index(a.node, a.port), 1.0);
      triplets.emplace_back(row, out_index(b.node, b.port), -oneway);
      ++row;
      continue;
    }
    triplets.emplace_back(row, in_index(a.node, a.port), 1.0);
    switch (b.kind) {
      case NetworkSpec::Endpoint::Kind::cavity:
        triplets.emplace_back(row, out_index(a.node, a.port),
                              -cavity_reflections[static_cast<size_t>(b.index)] * oneway * oneway);
        cavity_port[static_cast<size_t>(b.index)] = {a.node, a.port};
        break;
      case NetworkSpec::Endpoint::Kind::mirror:
        triplets.emplace_back(row, out_index(a.node, a.port), -oneway * oneway);
        break;
      case NetworkSpec::Endpoint::Kind::input:
        rhs(row) = 1.0;
        exit_ports.emplace_back(a.node, a.port);
        break;
      case NetworkSpec::Endpoint::Kind::open:
        exit_ports.emplace_back(a.node, a.port);
        break;
      default:
        break;
    }
    ++row;
  }

  Eigen::SparseMatrix<std::complex<double>> system(n, n);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();

  auto singular_report = [&]() {
    std::ostringstream msg;
    msg << "singular scattering system (degenerate lossless loop on resonance)";
    for (size_t c = 0; c < spec.cavities.size(); ++c) {
      const auto& cav = spec.cavities[c];
      const double alpha =
          std::remainder(atom_phases[static_cast<size_t>(cav.mode)] + 2.0 * cav.length * cav.detuning, 2 * kPi);
      if (cav.loss == 0 && std::abs(alpha) < 10 * cav.transmissivity)
        msg << "; lossless cavity " << c << " near resonance (alpha=" << alpha << ")";
    }
    return std::runtime_error(msg.str());
  };

  // Degenerate lossless loops on resonance make the system (near-)singular;
  // LU can still return an arbitrary member of the solution family there, so
  // small systems get an explicit conditioning check.
  if (n <= 512) {
    const Eigen::MatrixXcd dense(system);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-12 * sv(0)) throw singular_report();
  }

  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu(system);
  if (lu.info() != Eigen::Success) throw singular_report();

  NetworkSolution sol;
  sol.amplitudes = lu.solve(rhs);
  if (!sol.amplitudes.allFinite() || sol.amplitudes.cwiseAbs().maxCoeff() > 1e12)
    throw singular_report();
  sol.residual = (system * sol.amplitudes - rhs).cwiseAbs().maxCoeff();

  sol.cavity_incident.resize(spec.cavities.size());
  sol.cavity_power.resize(spec.cavities.size());
  sol.cavity_arm_power.resize(spec.cavities.size());
  for (size_t c = 0; c < spec.cavities.size(); ++c) {
    const auto& cav = spec.cavities[c];
    const auto [node, port] = cavity_port[c];
    const std::complex<double> inc = sol.amplitudes(out_index(node, port));
    sol.cavity_incident[c] = inc;
    const double alpha = atom_phases[static_cast<size_t>(cav.mode)] + 2.0 * cav.length * cav.detuning;
    const double r = std::sqrt(1.0 - cav.transmissivity);
    const double se = std::sqrt(1.0 - cav.loss);
    const double interior =
        cav.transmissivity / std::norm(1.0 - se * r * std::exp(kI * alpha));
    sol.cavity_power[c] = interior * std::norm(inc);
    sol.cavity_arm_power[c] = 4.0 / cav.transmissivity * std::norm(inc);
  }
  sol.output_power = 0;
  for (const auto& [node, port] : exit_ports)
    sol.output_power += std::norm(sol.amplitudes(out_index(node, port)));
  return sol;
}

std::vector<std::vector<double>> symmetric_grid(int modes, double z) {
  std::vector<std::vector<double>> points;
  const double values[3] = {-z, 0.0, z};
  std::vector<int> digits(static_cast<size_t>(modes), 0);
  while (true) {
    std::vector<double> point(static_cast<size_t>(modes));
    for (int m = 0; m < modes; ++m) point[static_cast<size_t>(m)] = values[digits[static_cast<size_t>(m)]];
    points.push_back(std::move(point));
    int m = 0;
    while (m < modes && ++digits[static_cast<size_t>(m)] == 3) digits[static_cast<size_t>(m++)] = 0;
    if (m == modes) break;
  }
  return points;
}

QuadraticFit effective_classical_hamiltonian(const NetworkSpec& spec,
                                             const std::vector<std::vector<double>>& z_points,
                                             const PhysicalParams& params) {
  const int modes = spec.mode_count();
  const int coeffs = modes + modes * (modes + 1) / 2;
  if (static_cast<int>(z_points.size()) < coeffs)
    throw std::invalid_argument("underdetermined fit: fewer grid points than coefficients");

  const double dphi = phase_per_atom(params);
  const double rate = params.photon_rate_value();

  Eigen::MatrixXd design(z_points.size(), coeffs);
  Eigen::VectorXd values(z_points.size());
  std::vector<double> phases(static_cast<size_t>(modes));
  for (size_t p = 0; p < z_points.size(); ++p) {
    const auto& z = z_points[p];
    if (static_cast<int>(z.size()) != modes)
      throw std::invalid_argument("grid point arity does not match the mode count");
    for (int m = 0; m < modes; ++m) phases[static_cast<size_t>(m)] = 2.0 * dphi * z[static_cast<size_t>(m)];
    const NetworkSolution sol = solve_steady_state(spec, phases);

    double h = 0;
    for (size_t c = 0; c < spec.cavities.size(); ++c)
      h += 2.0 * ac_stark_shift_from_rate(params, sol.cavity_power[c] * rate) *
           z[static_cast<size_t>(spec.cavities[c].mode)];
    values(static_cast<Eigen::Index>(p)) = h;

    int col = 0;
    for (int m = 0; m < modes; ++m) design(static_cast<Eigen::Index>(p), col++) = z[static_cast<size_t>(m)];
    for (int m = 0; m < modes; ++m)
      for (int k = m; k < modes; ++k)
        design(static_cast<Eigen::Index>(p), col++) = z[static_cast<size_t>(m)] * z[static_cast<size_t>(k)];
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double condition =
      svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (!std::isfinite(condition) || condition > 1e12)
    throw std::runtime_error("ill-conditioned fit: choose a better grid");
  Eigen::VectorXd coeff = svd.solve(values);

  QuadraticFit fit;
  fit.condition = condition;
  fit.omega = coeff.head(modes);
  fit.chi = Eigen::MatrixXd::Zero(modes, modes);
  int col = modes;
  for (int m = 0; m < modes; ++m)
    for (int k = m; k < modes; ++k) {
      if (m == k) {
        fit.chi(m, m) = coeff(col);
      } else {
        fit.chi(m, k) = fit.chi(k, m) = coeff(col) / 2.0;  // symmetric split of the cross term
      }
      ++col;
    }
  fit.residual = (design * coeff - values).cwiseAbs().maxCoeff();
  return fit;
}

NetworkSpec build_michelson_spec(const PhysicalParams& params) {
  using EP = NetworkSpec::Endpoint;
  NetworkSpec spec;
  spec.nodes.push_back({"bs", params.beam_splitter_transmissivity});
  spec.cavities.push_back({params.mirror_transmissivity, params.roundtrip_loss,
                           params.cavity_length, params.detuning, 0});
  spec.cavities.push_back({params.mirror_transmissivity, params.roundtrip_loss,
                           params.cavity_length, params.detuning, 1});
  spec.edges.push_back({EP::at_port(0, 0), EP::input(), 0.0});
  spec.edges.push_back({EP::at_port(0, 1), EP::at_cavity(1), 0.0});
  spec.edges.push_back({EP::at_port(0, 2), EP::mirror(), kPi / 2});
  spec.edges.push_back({EP::at_port(0, 3), EP::at_cavity(0), 0.0});
  return spec;
}

NetworkSpec build_five_cavity_spec(const FiveCavityConfig& config,
                                   std::span<const double> detunings_2ldk,
                                   std::span<const double> arm_phases, double link_phase) {
  if (detunings_2ldk.size() != 5 || arm_phases.size() != 5)
    throw std::invalid_argument("five detunings and five arm phases are required");
  using EP = NetworkSpec::Endpoint;
  const auto& p = config.params;

  NetworkSpec spec;
  spec.nodes.push_back({"bs1", p.beam_splitter_transmissivity});
  spec.nodes.push_back({"bs2", p.beam_splitter_transmissivity});
  for (int c = 0; c < 5; ++c)
    spec.cavities.push_back({p.mirror_transmissivity, p.roundtrip_loss, p.cavity_length,
                             detunings_2ldk[static_cast<size_t>(c)] / (2.0 * p.cavity_length), c});

  spec.edges.push_back({EP::at_port(0, 0), EP::input(), 0.0});
  spec.edges.push_back({EP::at_port(0, 1), EP::at_cavity(1), arm_phases[1]});
  spec.edges.push_back({EP::at_port(0, 3), EP::at_cavity(0), arm_phases[0]});
  spec.edges.push_back({EP::at_port(0, 2), EP::at_port(1, 0), link_phase});
  spec.edges.push_back({EP::at_port(1, 1), EP::at_cavity(3), arm_phases[3]});
  spec.edges.push_back({EP::at_port(1, 2), EP::at_cavity(4), arm_phases[4]});
  spec.edges.push_back({EP::at_port(1, 3), EP::at_cavity(2), arm_phases[2]});
  return spec;
}

SelectivityReport pair_selectivity_report(const FiveCavityConfig& config, int mode_j,
                                          int mode_k) {
  if (mode_j == mode_k || mode_j < 0 || mode_k < 0 || mode_j > 4 || mode_k > 4)
    throw std::invalid_argument("target pair must be two distinct modes in 0..4");
  const int j = std::min(mode_j, mode_k);
  const int k = std::max(mode_j, mode_k);

  const double t = config.params.mirror_transmissivity;
  const double near = config.near_detuning > 0 ? config.near_detuning : 0.02 * t;
  const double far = config.far_detuning > 0 ? config.far_detuning : 10.0 * t;
  const double far_arg =
      std::arg(cavity_reflection(far, t, config.params.roundtrip_loss));

  std::vector<int> far_modes;
  for (int m = 0; m < 5; ++m)
    if (m != j && m != k) far_modes.push_back(m);

  const auto grid = symmetric_grid(5, config.fit_z);
  SelectivityReport best;
  bool have_best = false;

  // Documented schedule: scan round-trip signs of the three far arms and a
  // small set of link phases; keep the configuration with the largest
  // passing target coupling (largest coupling overall if none passes).
  for (int pattern = 0; pattern < 8; ++pattern) {
    std::array<double, 5> detunings{};
    std::array<double, 5> arms{};
    std::vector<int> signs;
    for (int m = 0; m < 5; ++m) detunings[static_cast<size_t>(m)] = far;
    detunings[static_cast<size_t>(j)] = near;
    detunings[static_cast<size_t>(k)] = near;
    for (size_t f = 0; f < far_modes.size(); ++f) {
      const int sign = (pattern >> f) & 1 ? -1 : +1;
      signs.push_back(sign);
      // Recenters the far arm so its round trip is exactly +-1 at Z = 0.
      arms[static_cast<size_t>(far_modes[f])] = ((sign > 0 ? 0.0 : kPi) - far_arg) / 2.0;
    }
    for (double link : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4}) {
      const NetworkSpec spec = build_five_cavity_spec(config, detunings, arms, link);
      QuadraticFit fit;
      try {
        fit = effective_classical_hamiltonian(spec, grid, config.params);
      } catch (const std::runtime_error&) {
        continue;  // degenerate configuration
      }
      SelectivityReport report;
      report.mode_j = j;
      report.mode_k = k;
      report.target_chi = fit.chi(j, k);
      report.link_phase = link;
      report.far_signs = signs;
      double off = 0;
      for (int m = 0; m < 5; ++m)
        for (int n = m; n < 5; ++n) {
          if ((m == j && n == k) || (m == j && n == j) || (m == k && n == k)) continue;
          off = std::max(off, std::abs(fit.chi(m, n)));
        }
      report.max_off_target_chi = off;
      report.ratio = std::abs(report.target_chi) > 0
                         ? off / std::abs(report.target_chi)
                         : std::numeric_limits<double>::infinity();
      report.pass = report.ratio < report.threshold;
      report.fit = fit;

      auto better = [](const SelectivityReport& a, const SelectivityReport& b) {
        if (a.pass != b.pass) return a.pass;
        return std::abs(a.target_chi) > std::abs(b.target_chi);
      };
      if (!have_best || better(report, best)) {
        best = report;
        have_best = true;
      }
    }
  }
  if (!have_best) throw std::runtime_error("no usable five-cavity configuration found");
  return best;
}

}  // namespace spincav
