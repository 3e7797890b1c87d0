#pragma once

#include "json.hpp"
#include "sharpmax/tree.hpp"

// JSON fixtures for trees and tree functions:
//
//   {"nodes": [{"measure": 1.0, "children": [1, 2]},
//              {"measure": 0.5, "children": [], "value": 2.0},
//              {"measure": 0.5, "children": [], "value": 0.0}]}
//
// Node 0 is the root and every child index is larger than its parent's.
// "value" appears on leaves of serialized tree functions only.

namespace sharpmax {

nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& doc);

nlohmann::json function_to_json(const TreeFunction& phi);
TreeFunction function_from_json(const nlohmann::json& doc);

}  // namespace sharpmax
