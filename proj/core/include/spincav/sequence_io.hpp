#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "spincav/generators.hpp"

// Lossless JSON form of pulse sequences. Steps carry a tagged generator and a
// duration; metadata records target, method and nominal error order. Doubles
// survive the round trip bit-exactly (shortest round-trip formatting).

namespace spincav {

nlohmann::json to_json(const Generator& generator);
Generator generator_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const nlohmann::json& j);

void save_sequence(const PulseSequence& seq, const std::string& path);
PulseSequence load_sequence(const std::string& path);

}  // namespace spincav
