#include "shf/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace shf {

std::string Vertex::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

std::string Edge::str() const {
  std::ostringstream os;
  os << base.str() << "+g" << dir;
  return os.str();
}

Vertex vertex_sub(const Vertex& y, const Vertex& x) {
  if (y.dim() != x.dim()) throw ValidationError("dimension mismatch");
  std::vector<int> raw(y.coords());
  for (size_t i = 0; i < raw.size(); ++i) raw[i] -= x.coords()[i];
  return Vertex::canonical(std::move(raw));
}

std::optional<Edge> edge_between(const Vertex& u, const Vertex& v) {
  const int d = u.dim();
  for (int i = 1; i <= d + 1; ++i) {
    if (u.offset(i, +1) == v) return Edge{u, i};
    if (v.offset(i, +1) == u) return Edge{v, i};
  }
  return std::nullopt;
}

std::vector<Vertex> UnrootedLoop::vertices() const {
  const int d = dim();
  std::vector<Vertex> vs;
  vs.reserve(d + 1);
  Vertex cur = start;
  vs.push_back(cur);
  cur = cur.offset(d + 1, +1);
  vs.push_back(cur);
  for (int k = 0; k + 1 < d; ++k) {
    cur = cur.offset(xi[k], +1);
    vs.push_back(cur);
  }
  return vs;
}

std::vector<Edge> UnrootedLoop::edges() const {
  const int d = dim();
  std::vector<Edge> es;
  es.reserve(d + 1);
  Vertex cur = start;
  es.push_back(Edge{cur, d + 1});
  cur = cur.offset(d + 1, +1);
  for (int k = 0; k < d; ++k) {
    es.push_back(Edge{cur, xi[k]});
    cur = cur.offset(xi[k], +1);
  }
  return es;
}

std::vector<std::vector<int>> permutations_lex(int d) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i + 1;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int parity(const Vertex& v) {
  const int m = v.dim() + 1;
  long long s = 0;
  for (int c : v.coords()) s += c;
  return static_cast<int>(((s % m) + m) % m);
}

Value plus_norm(const Vertex& v) {
  long long sum = 0;
  int mn = v.coords()[0];
  for (int c : v.coords()) {
    sum += c;
    mn = std::min(mn, c);
  }
  return sum - static_cast<long long>(v.dim() + 1) * mn;
}

Value graph_distance(const Vertex& x, const Vertex& y) {
  const Vertex delta = vertex_sub(y, x);
  Value best = -1;
  for (int c : delta.coords()) {
    const long long k = -static_cast<long long>(c);
    long long tot = 0;
    for (int ci : delta.coords()) tot += std::llabs(ci + k);
    if (best < 0 || tot < best) best = tot;
  }
  return best;
}

std::vector<Vertex> neighbors(const Vertex& v) {
  const int d = v.dim();
  std::vector<Vertex> out;
  out.reserve(2 * (d + 1));
  for (int i = 1; i <= d + 1; ++i) out.push_back(v.offset(i, +1));
  for (int i = 1; i <= d + 1; ++i) out.push_back(v.offset(i, -1));
  return out;
}

std::vector<UnrootedLoop> loops_through(const Edge& e) {
  const int d = e.base.dim();
  std::vector<int> rest;
  for (int i = 1; i <= d + 1; ++i)
    if (i != e.dir) rest.push_back(i);

  std::vector<UnrootedLoop> out;
  std::sort(rest.begin(), rest.end());
  do {
    // Increment sequence of the rooted loop starting at e.base.
    std::vector<int> incs;
    incs.push_back(e.dir);
    incs.insert(incs.end(), rest.begin(), rest.end());

    // Re-root so the first increment is g_{d+1}.
    int p = 0;
    while (incs[p] != d + 1) ++p;
    Vertex start = e.base;
    for (int t = 0; t < p; ++t) start = start.offset(incs[t], +1);

    UnrootedLoop s;
    s.start = start;
    s.xi.reserve(d);
    for (int t = 1; t <= d; ++t) s.xi.push_back(incs[(p + t) % (d + 1)]);
    out.push_back(std::move(s));
  } while (std::next_permutation(rest.begin(), rest.end()));

  std::sort(out.begin(), out.end(),
            [](const UnrootedLoop& a, const UnrootedLoop& b) {
              return a.xi < b.xi;
            });
  return out;
}

bool Region::contains(const Vertex& v) const {
  return std::binary_search(verts.begin(), verts.end(), v);
}

Region Region::of(int d, std::vector<Vertex> vs, BoxKind kind) {
  for (const Vertex& v : vs)
    if (v.dim() != d) throw ValidationError("region vertex dimension mismatch");
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  Region r;
  r.d = d;
  r.kind = kind;
  r.verts = std::move(vs);
  return r;
}

Region make_box(BoxKind kind, int n, int d) {
  if (n <= 0) throw ValidationError("box size must be positive");
  int lo = 0, hi = 0;
  switch (kind) {
    case BoxKind::Box:
      lo = 1;
      hi = n - 1;
      break;
    case BoxKind::ClosedBox:
      lo = 0;
      hi = n;
      break;
    case BoxKind::CenteredBox:
      lo = -n;
      hi = n - 1;
      break;
    default:
      throw ValidationError("make_box requires a box kind");
  }
  std::vector<Vertex> vs;
  if (hi >= lo) {
    std::vector<int> a(d, lo);
    for (;;) {
      std::vector<int> raw(a);
      raw.push_back(0);
      vs.push_back(Vertex::canonical(std::move(raw)));
      int i = 0;
      while (i < d && a[i] == hi) a[i++] = lo;
      if (i == d) break;
      ++a[i];
    }
  }
  return Region::of(d, std::move(vs), kind);
}

std::vector<Vertex> region_boundary(const Region& r) {
  VertexSet seen;
  std::vector<Vertex> out;
  for (const Vertex& v : r.verts) {
    for (const Vertex& u : neighbors(v)) {
      if (!r.contains(u) && seen.insert(u).second) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> incident_edges(const Region& r) {
  const int d = r.d;
  EdgeSet seen;
  std::vector<Edge> out;
  for (const Vertex& v : r.verts) {
    for (int i = 1; i <= d + 1; ++i) {
      Edge up{v, i};
      if (seen.insert(up).second) out.push_back(up);
      Edge down{v.offset(i, -1), i};
      if (seen.insert(down).second) out.push_back(down);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool complement_connected(const Region& r) {
  if (r.verts.empty()) return true;
  const int d = r.d;
  std::vector<int> lo(d, 0), hi(d, 0);
  for (int i = 0; i < d; ++i) {
    lo[i] = r.verts[0].coords()[i];
    hi[i] = lo[i];
  }
  for (const Vertex& v : r.verts)
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], v.coords()[i]);
      hi[i] = std::max(hi[i], v.coords()[i]);
    }
  // Window = bounding box extended by one ring; the outer ring belongs to
  // the infinite complement component.
  for (int i = 0; i < d; ++i) {
    lo[i] -= 1;
    hi[i] += 1;
  }
  auto in_window = [&](const Vertex& v) {
    for (int i = 0; i < d; ++i)
      if (v.coords()[i] < lo[i] || v.coords()[i] > hi[i]) return false;
    return true;
  };
  VertexSet visited;
  std::deque<Vertex> queue;
  std::vector<int> a(d, 0);
  // Seed from the full ring.
  for (;;) {
    bool ring = false;
    for (int i = 0; i < d; ++i) ring |= (a[i] == lo[i] || a[i] == hi[i]);
    if (ring) {
      std::vector<int> raw(a);
      raw.push_back(0);
      Vertex v = Vertex::canonical(std::move(raw));
      if (!r.contains(v) && visited.insert(v).second) queue.push_back(v);
    }
    int i = 0;
    while (i < d && a[i] == hi[i]) a[i] = lo[i], ++i;
    if (i == d) break;
    ++a[i];
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (const Vertex& u : neighbors(v)) {
      if (!in_window(u) || r.contains(u)) continue;
      if (visited.insert(u).second) queue.push_back(u);
    }
  }
  // Every complement vertex in the window must reach the ring.
  std::vector<int> b(d, 0);
  for (int i = 0; i < d; ++i) b[i] = lo[i];
  for (;;) {
    std::vector<int> raw(b);
    raw.push_back(0);
    Vertex v = Vertex::canonical(std::move(raw));
    if (!r.contains(v) && !visited.count(v)) return false;
    int i = 0;
    while (i < d && b[i] == hi[i]) b[i] = lo[i], ++i;
    if (i == d) break;
    ++b[i];
  }
  return true;
}

}  // namespace shf
