#pragma once

#include <string>

#include "geoad/core.hpp"

#include "json.hpp"

namespace geoad {

// Instance wire format:
//   {
//     "lambdas": [l1, l2, ...],
//     "advertisers": [{"reward": r, "qualities": {"<node id>": q, ...}}, ...],
//     "paths": [{"gamma": g, "nodes": [vertex, ...]}, ...]
//   }
// "nodes" lists grid vertices in visit order; the path tree is rebuilt on
// load.  Qualities are keyed by tree node id; missing entries mean zero.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

void save_instance(const std::string& path, const Instance& inst);
Instance load_instance(const std::string& path);

// Plans serialise as {"<node id>": ad_index, ...}.
nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& j);

}  // namespace geoad
