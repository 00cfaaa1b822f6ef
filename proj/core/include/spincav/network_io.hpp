#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "spincav/network.hpp"

// JSON schema for network specs:
//
// {
//   "beam_splitters": [ {"name": "bs1", "transmissivity": 0.5}, ... ],
//   "cavities": [ {"name": "c1", "transmissivity": 5e-3, "loss": 1.2e-6,
//                  "length": 0.026, "detuning": 0.048, "mode": 0}, ... ],
//   "edges": [ {"from": "bs1:0", "to": "input", "phase": 0.0}, ... ]
// }
//
// Edge endpoints are "<splitter>:<port>", a cavity name, or one of the
// keywords "input", "mirror", "open". Ports: {0,1} face {2,3}; transmission
// pairs 0-2 and 1-3, reflection pairs 0-3 and 1-2.

namespace spincav {

nlohmann::json to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const nlohmann::json& j);

void save_network(const NetworkSpec& spec, const std::string& path);
NetworkSpec load_network(const std::string& path);

}  // namespace spincav
