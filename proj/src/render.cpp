#include "shf/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "shf/lattice.hpp"

namespace shf {

namespace {

struct Point {
  double x, y;
};

// Orthogonal projection of the canonical representative onto the rendering
// plane: e_1 -> (1, 0), e_2 -> (-1/2, sqrt(3)/2).
Point embed(const Vertex& v) {
  static const double kRoot3Half = std::sqrt(3.0) / 2.0;
  const double z1 = v.coords()[0];
  const double z2 = v.coords()[1];
  return Point{z1 - z2 / 2.0, z2 * kRoot3Half};
}

}  // namespace

std::string render_svg(const HeightField& f, const Region& window) {
  if (f.dim() != 2)
    throw ValidationError("rendering is defined for d = 2 only");
  if (window.d != 2) throw ValidationError("window must be two-dimensional");
  const ValidityReport rep = validate(f);
  if (!rep.ok) throw ValidationError("cannot render an invalid field");

  auto in_window = [&](const Vertex& v) { return window.contains(v); };

  // Tiles: edges with gradient -d whose two triangles stay in the window.
  std::vector<Edge> tiles;
  for (const Vertex& v : window.verts) {
    for (int dir = 1; dir <= 3; ++dir) {
      for (Edge e : {Edge{v, dir}, Edge{v.offset(dir, -1), dir}}) {
        if (gradient(f, e) != -2) continue;
        bool inside = true;
        for (const UnrootedLoop& s : loops_through(e))
          for (const Vertex& u : s.vertices()) inside &= in_window(u);
        if (!inside) continue;
        if (std::find(tiles.begin(), tiles.end(), e) == tiles.end())
          tiles.push_back(e);
      }
    }
  }
  std::sort(tiles.begin(), tiles.end());

  static const char* kFills[3] = {"#d9544f", "#5b9bd5", "#f0c75e"};

  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool first = true;
  std::vector<std::array<Point, 4>> quads;
  std::vector<int> classes;
  for (const Edge& e : tiles) {
    const auto loops = loops_through(e);
    // Quadrilateral: base, third vertex of one triangle, tip, third vertex
    // of the other.
    std::vector<Vertex> thirds;
    for (const UnrootedLoop& s : loops)
      for (const Vertex& u : s.vertices())
        if (!(u == e.base) && !(u == e.other())) thirds.push_back(u);
    if (thirds.size() != 2) continue;
    const std::array<Point, 4> quad{embed(e.base), embed(thirds[0]),
                                    embed(e.other()), embed(thirds[1])};
    for (const Point& p : quad) {
      if (first) {
        min_x = max_x = p.x;
        min_y = max_y = p.y;
        first = false;
      }
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    quads.push_back(quad);
    classes.push_back(e.dir - 1);
  }

  const double scale = 40.0, pad = 20.0;
  const double width = (max_x - min_x) * scale + 2 * pad;
  const double height = (max_y - min_y) * scale + 2 * pad;
  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  for (size_t i = 0; i < quads.size(); ++i) {
    svg << "  <polygon points=\"";
    for (size_t k = 0; k < 4; ++k) {
      const Point& p = quads[i][k];
      const double px = (p.x - min_x) * scale + pad;
      const double py = height - ((p.y - min_y) * scale + pad);
      svg << (k ? " " : "") << px << "," << py;
    }
    svg << "\" fill=\"" << kFills[classes[i]]
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace shf
