#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "shf/rational.hpp"

namespace shf {

// Vertex of the simplicial lattice: the class x + Z*n of a point x in
// Z^{d+1}, where n = (1,...,1). The canonical representative has last
// coordinate zero, so equality of classes is plain equality of coords.
class Vertex {
 public:
  Vertex() = default;

  static Vertex canonical(std::vector<int> raw) {
    if (raw.size() < 3)
      throw ValidationError("vertex needs d+1 >= 3 coordinates");
    const int k = raw.back();
    if (k != 0)
      for (int& c : raw) c -= k;
    Vertex v;
    v.c_ = std::move(raw);
    return v;
  }

  // Origin of X^d.
  static Vertex origin(int d) {
    Vertex v;
    v.c_.assign(d + 1, 0);
    return v;
  }

  const std::vector<int>& coords() const { return c_; }
  int dim() const { return static_cast<int>(c_.size()) - 1; }

  // Class of x + sign*e_dir, dir in 1..d+1.
  Vertex offset(int dir, int sign) const {
    Vertex v = *this;
    v.c_[dir - 1] += sign;
    if (dir == dim() + 1) {
      for (int& c : v.c_) c -= sign;
    }
    return v;
  }

  Vertex translated(const Vertex& t) const {
    std::vector<int> raw(c_);
    for (size_t i = 0; i < raw.size(); ++i) raw[i] += t.c_[i];
    return canonical(std::move(raw));
  }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex& a, const Vertex& b) {
    return a.c_ <=> b.c_;
  }

  std::string str() const;

 private:
  std::vector<int> c_;
};

struct VertexHash {
  size_t operator()(const Vertex& v) const {
    size_t h = 0x9e3779b97f4a7c15ull ^ v.coords().size();
    for (int c : v.coords()) {
      h ^= static_cast<size_t>(static_cast<uint32_t>(c)) + 0x9e3779b97f4a7c15ull +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

using VertexSet = std::unordered_set<Vertex, VertexHash>;

// Class difference y - x (canonical representative of the difference class).
Vertex vertex_sub(const Vertex& y, const Vertex& x);

// Undirected edge {x, x+g_i}, stored from the endpoint the +g_i step
// departs from. This representation is unique: for d >= 2 no two distinct
// (base, dir) pairs give the same undirected edge.
struct Edge {
  Vertex base;
  int dir = 1;  // 1..d+1

  Vertex other() const { return base.offset(dir, +1); }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    return a.dir <=> b.dir;
  }

  std::string str() const;
};

struct EdgeHash {
  size_t operator()(const Edge& e) const {
    return VertexHash{}(e.base) * 1315423911u ^ static_cast<size_t>(e.dir);
  }
};

using EdgeSet = std::unordered_set<Edge, EdgeHash>;

// The canonical edge joining two adjacent vertices, if any.
std::optional<Edge> edge_between(const Vertex& u, const Vertex& v);

// Unrooted simplicial loop: d+1 steps whose increments are a permutation of
// {g_1..g_{d+1}}. Indexed so the first increment is g_{d+1}; the remaining
// order xi (a permutation of 1..d) then determines the loop uniquely.
struct UnrootedLoop {
  Vertex start;
  std::vector<int> xi;  // permutation of 1..d

  int dim() const { return start.dim(); }

  // The d+1 distinct vertices in traversal order.
  std::vector<Vertex> vertices() const;
  // The d+1 canonical edges in traversal order.
  std::vector<Edge> edges() const;

  friend bool operator==(const UnrootedLoop&, const UnrootedLoop&) = default;
  friend auto operator<=>(const UnrootedLoop& a, const UnrootedLoop& b) {
    if (auto c = a.start <=> b.start; c != 0) return c;
    return a.xi <=> b.xi;
  }
};

struct LoopHash {
  size_t operator()(const UnrootedLoop& s) const {
    size_t h = VertexHash{}(s.start);
    for (int i : s.xi) h = h * 131 + static_cast<size_t>(i);
    return h;
  }
};

// All permutations of 1..d in lexicographic order (the fixed global
// enumeration of S_d used by the Kasteleyn machinery).
std::vector<std::vector<int>> permutations_lex(int d);

int parity(const Vertex& v);

// |v|_+ = sum(z) - (d+1)*min(z) on the canonical representative; the length
// of the shortest path using only +g_i increments.
Value plus_norm(const Vertex& v);

Value graph_distance(const Vertex& x, const Vertex& y);

std::vector<Vertex> neighbors(const Vertex& v);

// The d! unrooted loops traversing e, sorted by their xi order; exactly one
// per class in S_d.
std::vector<UnrootedLoop> loops_through(const Edge& e);

inline std::vector<Edge> edges_of_loop(const UnrootedLoop& s) {
  return s.edges();
}

enum class BoxKind { Generic, Box, ClosedBox, CenteredBox };

// Finite vertex set with deterministic (sorted) order.
struct Region {
  int d = 2;
  BoxKind kind = BoxKind::Generic;
  std::vector<Vertex> verts;  // sorted, unique

  bool contains(const Vertex& v) const;
  size_t size() const { return verts.size(); }

  static Region of(int d, std::vector<Vertex> vs,
                   BoxKind kind = BoxKind::Generic);
};

// B_n, closed box, or centred box Pi_n in dimension d.
Region make_box(BoxKind kind, int n, int d);

// Vertices adjacent to R but not in R.
std::vector<Vertex> region_boundary(const Region& r);

// E^d(R): canonical edges with at least one endpoint in R, sorted.
std::vector<Edge> incident_edges(const Region& r);

// Whether the complement of R is connected (finite check: every complement
// vertex of the bounding window reaches the window's outer ring).
bool complement_connected(const Region& r);

}  // namespace shf
