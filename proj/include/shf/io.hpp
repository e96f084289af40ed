#pragma once

#include <string>

#include <json.hpp>

#include "shf/cluster.hpp"
#include "shf/kasteleyn.hpp"
#include "shf/regions.hpp"
#include "shf/tension.hpp"

namespace shf {

using Json = nlohmann::ordered_json;

Json to_json(const Vertex& v);
Vertex vertex_from_json(const Json& j);

Json to_json(const Edge& e);
Edge edge_from_json(const Json& j);

Json to_json(const Slope& s);
Slope slope_from_json(const Json& j);

Json to_json(const HeightField& f);
HeightField field_from_json(const Json& j);

Json to_json(const Tiling& t);
Tiling tiling_from_json(const Json& j);

Json to_json(const Region& r);
Region region_from_json(const Json& j, int d);

Json to_json(const FixedBoundary& bc);
FixedBoundary fixed_boundary_from_json(const Json& j);

Json to_json(const WeightFunction& w);
WeightFunction weights_from_json(const Json& j);

Json to_json(const KasteleynReport& rep);
Json to_json(const IdentityReport& rep);

// Parses a comma-separated slope list "p/q,p/q,...".
Slope slope_from_string(const std::string& text);

}  // namespace shf
