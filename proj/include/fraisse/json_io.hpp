#pragma once

#include <json.hpp>

#include "fraisse/core.hpp"

namespace fraisse {

nlohmann::json structure_to_json(const FinStructure& a);
FinStructure structure_from_json(const nlohmann::json& j);
FinStructure parse_structure(const std::string& text);  // throws std::runtime_error

std::string structure_to_dot(const FinStructure& a,
                             int apex_start = -1 /* vertices >= this drawn as boxes */);

nlohmann::json embedding_to_json(const FinStructure& a, const FinStructure& b,
                                 std::span<const int> map);

}  // namespace fraisse
