#include "shf/io.hpp"

#include <sstream>

namespace shf {

Json to_json(const Vertex& v) {
  Json j = Json::array();
  for (int c : v.coords()) j.push_back(c);
  return j;
}

Vertex vertex_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("vertex must be a JSON array");
  std::vector<int> raw;
  for (const auto& c : j) raw.push_back(c.get<int>());
  return Vertex::canonical(std::move(raw));
}

Json to_json(const Edge& e) {
  return Json{{"base", to_json(e.base)}, {"dir", e.dir}};
}

Edge edge_from_json(const Json& j) {
  Edge e;
  e.base = vertex_from_json(j.at("base"));
  e.dir = j.at("dir").get<int>();
  if (e.dir < 1 || e.dir > e.base.dim() + 1)
    throw ValidationError("edge direction out of range");
  return e;
}

Json to_json(const Slope& s) {
  Json j = Json::array();
  for (const Rat& r : s.g) j.push_back(rat_to_string(r));
  return j;
}

Slope slope_from_json(const Json& j) {
  Slope s;
  for (const auto& r : j) s.g.push_back(parse_rat(r.get<std::string>()));
  if (s.g.size() < 3) throw ValidationError("slope needs d+1 >= 3 entries");
  return s;
}

Json to_json(const HeightField& f) {
  Json over = Json::array();
  for (const auto& [v, val] : f.overrides())
    over.push_back(Json::array({to_json(v), val}));
  return Json{{"d", f.dim()},
              {"slope", to_json(f.slope())},
              {"offset", rat_to_string(f.offset())},
              {"overrides", std::move(over)}};
}

HeightField field_from_json(const Json& j) {
  const Slope s = slope_from_json(j.at("slope"));
  const Rat offset = parse_rat(j.at("offset").get<std::string>());
  if (j.contains("d") && j.at("d").get<int>() != s.dim())
    throw ValidationError("field dimension disagrees with its slope");
  Overrides over;
  for (const auto& kv : j.at("overrides")) {
    Vertex v = vertex_from_json(kv.at(0));
    if (v.dim() != s.dim())
      throw ValidationError("override vertex arity disagrees with the slope");
    over[std::move(v)] = kv.at(1).get<Value>();
  }
  return HeightField(s, offset, std::move(over));
}

Json to_json(const Tiling& t) {
  std::vector<Vertex> window(t.window.begin(), t.window.end());
  std::sort(window.begin(), window.end());
  std::vector<Edge> tiles(t.tiles.begin(), t.tiles.end());
  std::sort(tiles.begin(), tiles.end());
  Json jw = Json::array(), je = Json::array();
  for (const Vertex& v : window) jw.push_back(to_json(v));
  for (const Edge& e : tiles) je.push_back(to_json(e));
  return Json{{"d", t.dim()},
              {"slope", to_json(t.slope)},
              {"offset", rat_to_string(t.offset)},
              {"window", std::move(jw)},
              {"edges", std::move(je)}};
}

Tiling tiling_from_json(const Json& j) {
  Tiling t;
  t.slope = slope_from_json(j.at("slope"));
  t.offset = parse_rat(j.at("offset").get<std::string>());
  for (const auto& v : j.at("window")) t.window.insert(vertex_from_json(v));
  for (const auto& e : j.at("edges")) t.tiles.insert(edge_from_json(e));
  return t;
}

namespace {

std::string kind_name(BoxKind k) {
  switch (k) {
    case BoxKind::Box:
      return "box";
    case BoxKind::ClosedBox:
      return "closed-box";
    case BoxKind::CenteredBox:
      return "centered-box";
    default:
      return "generic";
  }
}

BoxKind kind_from_name(const std::string& s) {
  if (s == "box") return BoxKind::Box;
  if (s == "closed-box") return BoxKind::ClosedBox;
  if (s == "centered-box") return BoxKind::CenteredBox;
  if (s == "generic") return BoxKind::Generic;
  throw ValidationError("unknown region kind: " + s);
}

}  // namespace

Json to_json(const Region& r) {
  Json verts = Json::array();
  for (const Vertex& v : r.verts) verts.push_back(to_json(v));
  return Json{{"kind", kind_name(r.kind)}, {"vertices", std::move(verts)}};
}

Region region_from_json(const Json& j, int d) {
  const BoxKind kind =
      j.contains("kind") ? kind_from_name(j.at("kind").get<std::string>())
                         : BoxKind::Generic;
  if (j.contains("n") && kind != BoxKind::Generic)
    return make_box(kind, j.at("n").get<int>(), d);
  std::vector<Vertex> vs;
  for (const auto& v : j.at("vertices")) vs.push_back(vertex_from_json(v));
  return Region::of(d, std::move(vs), kind);
}

Json to_json(const FixedBoundary& bc) {
  return Json{{"d", bc.dim()},
              {"region", to_json(bc.region)},
              {"reference", to_json(bc.reference)}};
}

FixedBoundary fixed_boundary_from_json(const Json& j) {
  FixedBoundary bc;
  bc.reference = field_from_json(j.at("reference"));
  bc.region = region_from_json(j.at("region"), bc.reference.dim());
  return bc;
}

Json to_json(const WeightFunction& w) {
  std::vector<Edge> keys;
  for (const auto& [e, r] : w.entries()) keys.push_back(e);
  std::sort(keys.begin(), keys.end());
  Json entries = Json::array();
  for (const Edge& e : keys)
    entries.push_back(Json::array({to_json(e), rat_to_string(w.at(e))}));
  return Json{{"default", rat_to_string(w.fallback())},
              {"entries", std::move(entries)}};
}

WeightFunction weights_from_json(const Json& j) {
  WeightFunction w(j.contains("default")
                       ? parse_rat(j.at("default").get<std::string>())
                       : Rat(1));
  if (j.contains("entries"))
    for (const auto& kv : j.at("entries"))
      w.set(edge_from_json(kv.at(0)), parse_rat(kv.at(1).get<std::string>()));
  return w;
}

Json to_json(const KasteleynReport& rep) {
  return Json{{"n", rep.n},
              {"rank", rep.rank},
              {"Z", rat_to_string(rep.z)},
              {"det", rat_to_string(rep.det)},
              {"sign", rep.sign},
              {"sign_uniform", rep.sign_uniform},
              {"equal", rep.equal}};
}

Json to_json(const IdentityReport& rep) {
  return Json{{"lhs", rat_to_string(rep.lhs)},
              {"rhs", rat_to_string(rep.rhs)},
              {"equal", rep.equal}};
}

Slope slope_from_string(const std::string& text) {
  Slope s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) s.g.push_back(parse_rat(item));
  if (s.g.size() < 3) throw ValidationError("slope needs d+1 >= 3 entries");
  return s;
}

}  // namespace shf
