#include "spincav/network_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace spincav {

using nlohmann::json;
using Endpoint = NetworkSpec::Endpoint;

namespace {

std::string endpoint_to_string(const Endpoint& e, const NetworkSpec& spec) {
  switch (e.kind) {
    case Endpoint::Kind::port:
      return spec.nodes[static_cast<size_t>(e.node)].name + ":" + std::to_string(e.port);
    case Endpoint::Kind::cavity:
      return "cavity" + std::to_string(e.index);
    case Endpoint::Kind::mirror:
      return "mirror";
    case Endpoint::Kind::input:
      return "input";
    case Endpoint::Kind::open:
      return "open";
  }
  return "?";
}

Endpoint endpoint_from_string(const std::string& s, const NetworkSpec& spec,
                              const std::vector<std::string>& cavity_names) {
  if (s == "input") return Endpoint::input();
  if (s == "mirror") return Endpoint::mirror();
  if (s == "open") return Endpoint::open();
  for (size_t c = 0; c < cavity_names.size(); ++c)
    if (cavity_names[c] == s) return Endpoint::at_cavity(static_cast<int>(c));
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    const std::string name = s.substr(0, colon);
    for (size_t b = 0; b < spec.nodes.size(); ++b)
      if (spec.nodes[b].name == name)
        return Endpoint::at_port(static_cast<int>(b), std::stoi(s.substr(colon + 1)));
  }
  throw std::invalid_argument("unknown network endpoint: " + s);
}

}  // namespace

json to_json(const NetworkSpec& spec) {
  json splitters = json::array();
  for (const auto& bs : spec.nodes)
    splitters.push_back({{"name", bs.name}, {"transmissivity", bs.transmissivity}});
  json cavities = json::array();
  for (size_t c = 0; c < spec.cavities.size(); ++c) {
    const auto& cav = spec.cavities[c];
    cavities.push_back({{"name", "cavity" + std::to_string(c)},
                        {"transmissivity", cav.transmissivity},
                        {"loss", cav.loss},
                        {"length", cav.length},
                        {"detuning", cav.detuning},
                        {"mode", cav.mode}});
  }
  json edges = json::array();
  for (const auto& edge : spec.edges)
    edges.push_back({{"from", endpoint_to_string(edge.a, spec)},
                     {"to", endpoint_to_string(edge.b, spec)},
                     {"phase", edge.phase}});
  return {{"beam_splitters", splitters}, {"cavities", cavities}, {"edges", edges}};
}

NetworkSpec network_from_json(const json& j) {
  NetworkSpec spec;
  for (const auto& bs : j.at("beam_splitters"))
    spec.nodes.push_back(
        {bs.at("name").get<std::string>(), bs.at("transmissivity").get<double>()});
  std::vector<std::string> cavity_names;
  if (j.contains("cavities"))
    for (const auto& cav : j.at("cavities")) {
      spec.cavities.push_back({cav.at("transmissivity").get<double>(),
                               cav.at("loss").get<double>(), cav.at("length").get<double>(),
                               cav.at("detuning").get<double>(), cav.at("mode").get<int>()});
      cavity_names.push_back(cav.at("name").get<std::string>());
    }
  for (const auto& edge : j.at("edges"))
    spec.edges.push_back({endpoint_from_string(edge.at("from").get<std::string>(), spec, cavity_names),
                          endpoint_from_string(edge.at("to").get<std::string>(), spec, cavity_names),
                          edge.at("phase").get<double>()});
  spec.validate();
  return spec;
}

void save_network(const NetworkSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json(spec).dump(2) << "\n";
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return network_from_json(json::parse(in));
}

}  // namespace spincav
