#include "spincav/sequence_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace spincav {

using nlohmann::json;

json to_json(const Generator& generator) {
  json j;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearGenerator>) {
          j = {{"type", "linear"}, {"mode", g.mode}, {"x", g.x}, {"y", g.y}, {"z", g.z}};
        } else if constexpr (std::is_same_v<T, TwistGenerator>) {
          j = {{"type", "twist"}, {"mode", g.mode}, {"sign", g.sign}, {"strength", g.strength}};
        } else if constexpr (std::is_same_v<T, PairGenerator>) {
          j = {{"type", "pair"},
               {"modes", {g.mode1, g.mode2}},
               {"omega", g.omega},
               {"tb", g.beam_splitter_transmissivity},
               {"chi", g.chi}};
        } else if constexpr (std::is_same_v<T, QndGenerator>) {
          j = {{"type", "qnd"}, {"modes", {g.mode1, g.mode2}}, {"strength", g.strength}};
        } else {
          json terms = json::array();
          for (const auto& term : g.polynomial.terms) {
            json factors = json::array();
            for (const auto& f : term.factors)
              factors.push_back({{"mode", f.mode}, {"axis", std::string(1, axis_name(f.axis))}});
            terms.push_back({{"coefficient", term.coefficient}, {"word", factors}});
          }
          j = {{"type", "word"}, {"terms", terms}};
        }
      },
      generator.value());
  return j;
}

Generator generator_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") {
    return LinearGenerator{j.at("mode").get<int>(), j.at("x").get<double>(),
                           j.at("y").get<double>(), j.at("z").get<double>()};
  }
  if (type == "twist") {
    return TwistGenerator{j.at("mode").get<int>(), j.at("sign").get<int>(),
                          j.at("strength").get<double>()};
  }
  if (type == "pair") {
    const auto& modes = j.at("modes");
    return PairGenerator{modes.at(0).get<int>(), modes.at(1).get<int>(),
                         j.at("omega").get<double>(), j.at("tb").get<double>(),
                         j.at("chi").get<double>()};
  }
  if (type == "qnd") {
    const auto& modes = j.at("modes");
    return QndGenerator{modes.at(0).get<int>(), modes.at(1).get<int>(),
                        j.at("strength").get<double>()};
  }
  if (type == "word") {
    PolynomialHamiltonian poly;
    for (const auto& term : j.at("terms")) {
      OperatorWord word;
      word.coefficient = term.at("coefficient").get<double>();
      for (const auto& f : term.at("word"))
        word.factors.push_back(
            {f.at("mode").get<int>(), axis_from_name(f.at("axis").get<std::string>().at(0))});
      poly.terms.push_back(std::move(word));
    }
    return WordGenerator{std::move(poly)};
  }
  throw std::invalid_argument("unknown generator type: " + type);
}

json to_json(const PulseSequence& seq) {
  json steps = json::array();
  for (const auto& step : seq.steps)
    steps.push_back({{"generator", to_json(step.generator)}, {"duration", step.duration}});
  return {{"metadata",
           {{"target", seq.metadata.target},
            {"method", seq.metadata.method},
            {"error_order", seq.metadata.error_order}}},
          {"steps", steps}};
}

PulseSequence sequence_from_json(const json& j) {
  PulseSequence seq;
  const auto& meta = j.at("metadata");
  seq.metadata.target = meta.at("target").get<std::string>();
  seq.metadata.method = meta.at("method").get<std::string>();
  seq.metadata.error_order = meta.at("error_order").get<int>();
  for (const auto& step : j.at("steps"))
    seq.append(generator_from_json(step.at("generator")), step.at("duration").get<double>());
  return seq;
}

void save_sequence(const PulseSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json(seq).dump(2) << "\n";
}

PulseSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return sequence_from_json(json::parse(in));
}

}  // namespace spincav
