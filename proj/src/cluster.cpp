#include "shf/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace shf {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void require_same_boundary(const FixedBoundary& bc, const HeightField& f1,
                           const HeightField& f2) {
  if (f1.slope() != f2.slope() || f1.offset() != f2.offset())
    throw ValidationError("pair must share a background");
  // Equality off R is spot-checked on every override vertex.
  for (const auto& [v, val] : f1.overrides())
    if (!bc.region.contains(v) && f2.value(v) != val)
      throw ValidationError("pair differs outside the region");
  for (const auto& [v, val] : f2.overrides())
    if (!bc.region.contains(v) && f1.value(v) != val)
      throw ValidationError("pair differs outside the region");
}

}  // namespace

int BoundaryGraph::boundary_of(const Edge& e) const {
  for (size_t b = 0; b < boundaries.size(); ++b)
    for (int i : boundaries[b])
      if (support[i] == e) return static_cast<int>(b);
  return -1;
}

BoundaryGraph difference_support(const FixedBoundary& bc,
                                 const HeightField& f1,
                                 const HeightField& f2) {
  require_same_boundary(bc, f1, f2);
  auto g = [&](const Vertex& v) { return f1.value(v) - f2.value(v); };

  BoundaryGraph out;
  for (const Edge& e : incident_edges(bc.region)) {
    if (g(e.base) != g(e.other())) out.support.push_back(e);
  }
  std::unordered_map<Edge, int, EdgeHash> index;
  for (size_t i = 0; i < out.support.size(); ++i)
    index[out.support[i]] = static_cast<int>(i);

  UnionFind uf(out.support.size());
  for (const Edge& e : out.support) {
    for (const UnrootedLoop& s : loops_through(e)) {
      // Each loop through a support edge carries exactly one other one.
      std::vector<int> hits;
      for (const Edge& le : s.edges()) {
        auto it = index.find(le);
        if (it != index.end()) hits.push_back(it->second);
      }
      if (hits.size() != 2)
        throw ValidationError("difference is not a valid tiling pair");
      uf.unite(hits[0], hits[1]);
    }
  }
  std::unordered_map<int, int> comp;
  for (size_t i = 0; i < out.support.size(); ++i) {
    const int r = uf.find(static_cast<int>(i));
    auto [it, inserted] = comp.try_emplace(r, static_cast<int>(out.boundaries.size()));
    if (inserted) out.boundaries.emplace_back();
    out.boundaries[it->second].push_back(static_cast<int>(i));
  }
  return out;
}

LevelSetDecomposition build_lsd(const FixedBoundary& bc, const HeightField& f1,
                                const HeightField& f2) {
  check_fixed_boundary(bc, /*require_region=*/true);
  LevelSetDecomposition lsd;
  lsd.graph = difference_support(bc, f1, f2);
  if (bc.region.verts.empty()) {
    lsd.root = 0;
    lsd.level_set_count = 1;
    lsd.g_value = {0};
    lsd.parent = {-1};
    lsd.parent_boundary = {-1};
    lsd.depth = {0};
    return lsd;
  }

  EdgeSet vg;
  for (const Edge& e : lsd.graph.support) vg.insert(e);
  std::vector<int> boundary_index(lsd.graph.support.size(), -1);
  for (size_t b = 0; b < lsd.graph.boundaries.size(); ++b)
    for (int i : lsd.graph.boundaries[b]) boundary_index[i] = static_cast<int>(b);

  // Window = R and its boundary ring; the whole complement collapses into
  // the level set of the ring (the complement is connected and carries no
  // support edges).
  std::vector<Vertex> window = bc.region.verts;
  const std::vector<Vertex> ring = region_boundary(bc.region);
  window.insert(window.end(), ring.begin(), ring.end());
  std::sort(window.begin(), window.end());
  std::unordered_map<Vertex, int, VertexHash> pos;
  for (size_t i = 0; i < window.size(); ++i)
    pos[window[i]] = static_cast<int>(i);

  UnionFind uf(window.size());
  for (size_t i = 0; i < window.size(); ++i) {
    const int d = bc.dim();
    for (int dir = 1; dir <= d + 1; ++dir) {
      const Edge e{window[i], dir};
      auto it = pos.find(e.other());
      if (it == pos.end()) continue;
      if (!vg.count(e)) uf.unite(static_cast<int>(i), it->second);
    }
  }
  for (const Vertex& v : ring) uf.unite(pos[ring.front()], pos[v]);

  std::unordered_map<int, int> comp;
  std::vector<int> level(window.size());
  for (size_t i = 0; i < window.size(); ++i) {
    const int r = uf.find(static_cast<int>(i));
    auto [it, inserted] = comp.try_emplace(r, static_cast<int>(comp.size()));
    level[i] = it->second;
    lsd.level_of_vertex[window[i]] = it->second;
  }
  lsd.level_set_count = static_cast<int>(comp.size());
  lsd.root = level[pos[ring.front()]];

  // g is constant on each level set.
  lsd.g_value.assign(lsd.level_set_count, 0);
  std::vector<bool> seen(lsd.level_set_count, false);
  for (size_t i = 0; i < window.size(); ++i) {
    const Value g = f1.value(window[i]) - f2.value(window[i]);
    if (seen[level[i]]) {
      if (lsd.g_value[level[i]] != g)
        throw ValidationError("difference not constant on a level set");
    } else {
      lsd.g_value[level[i]] = g;
      seen[level[i]] = true;
    }
  }

  // One tree edge per boundary, oriented from the low to the high side.
  lsd.low_side.assign(lsd.graph.boundary_count(), -1);
  lsd.high_side.assign(lsd.graph.boundary_count(), -1);
  auto g = [&](const Vertex& v) { return f1.value(v) - f2.value(v); };
  for (size_t b = 0; b < lsd.graph.boundary_count(); ++b) {
    for (int i : lsd.graph.boundaries[b]) {
      const Edge& e = lsd.graph.support[static_cast<size_t>(i)];
      Vertex lo = e.base, hi = e.other();
      if (g(lo) > g(hi)) std::swap(lo, hi);
      const int lo_ls = lsd.level_of_vertex.at(lo);
      const int hi_ls = lsd.level_of_vertex.at(hi);
      if (lsd.low_side[b] < 0) {
        lsd.low_side[b] = lo_ls;
        lsd.high_side[b] = hi_ls;
      } else if (lsd.low_side[b] != lo_ls || lsd.high_side[b] != hi_ls) {
        throw ValidationError("boundary does not join two level sets");
      }
      if (g(hi) - g(lo) != bc.dim() + 1)
        throw ValidationError("difference jump is not d+1 across an edge");
    }
  }

  // BFS over the (level set, boundary) graph; it must be a tree.
  lsd.parent.assign(lsd.level_set_count, -1);
  lsd.parent_boundary.assign(lsd.level_set_count, -1);
  lsd.depth.assign(lsd.level_set_count, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(lsd.level_set_count);
  for (size_t b = 0; b < lsd.graph.boundary_count(); ++b) {
    adj[lsd.low_side[b]].push_back({lsd.high_side[b], static_cast<int>(b)});
    adj[lsd.high_side[b]].push_back({lsd.low_side[b], static_cast<int>(b)});
  }
  std::deque<int> queue{lsd.root};
  lsd.depth[lsd.root] = 0;
  int visited = 0;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    ++visited;
    for (auto [nxt, b] : adj[c]) {
      if (lsd.depth[nxt] >= 0) continue;
      lsd.depth[nxt] = lsd.depth[c] + 1;
      lsd.parent[nxt] = c;
      lsd.parent_boundary[nxt] = b;
      queue.push_back(nxt);
    }
  }
  if (visited != lsd.level_set_count ||
      lsd.graph.boundary_count() + 1 != static_cast<size_t>(lsd.level_set_count))
    throw ValidationError("level set decomposition is not a tree");
  return lsd;
}

int LevelSetDecomposition::level_of(const Vertex& v) const {
  auto it = level_of_vertex.find(v);
  if (it == level_of_vertex.end()) return root;
  return it->second;
}

int lsd_distance(const LevelSetDecomposition& lsd, const Vertex& x) {
  return lsd.depth[lsd.level_of(x)];
}

int lsd_distance_to(const LevelSetDecomposition& lsd, int level_set) {
  return lsd.depth[level_set];
}

int meet_vertex(const LevelSetDecomposition& lsd, const Vertex& x,
                const Vertex& y) {
  int a = lsd.level_of(x), b = lsd.level_of(y);
  while (lsd.depth[a] > lsd.depth[b]) a = lsd.parent[a];
  while (lsd.depth[b] > lsd.depth[a]) b = lsd.parent[b];
  while (a != b) {
    a = lsd.parent[a];
    b = lsd.parent[b];
  }
  return a;
}

std::pair<HeightField, HeightField> swap_pair(const FixedBoundary& bc,
                                              const HeightField& f1,
                                              const HeightField& f2,
                                              const SwapMask& mask) {
  const LevelSetDecomposition lsd = build_lsd(bc, f1, f2);
  for (int b : mask)
    if (b < 0 || static_cast<size_t>(b) >= lsd.graph.boundary_count())
      throw ValidationError("mask selects a nonexistent boundary");

  // New difference values: walk the tree, flipping the step across masked
  // boundaries.
  std::vector<Value> gnew(lsd.level_set_count, 0);
  gnew[lsd.root] = lsd.g_value[lsd.root];
  std::deque<int> queue{lsd.root};
  std::vector<std::vector<int>> children(lsd.level_set_count);
  for (int c = 0; c < lsd.level_set_count; ++c)
    if (lsd.parent[c] >= 0) children[lsd.parent[c]].push_back(c);
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    for (int nxt : children[c]) {
      const int b = lsd.parent_boundary[nxt];
      Value step = lsd.g_value[nxt] - lsd.g_value[c];
      if (mask.count(b)) step = -step;
      gnew[nxt] = gnew[c] + step;
      queue.push_back(nxt);
    }
  }

  auto rebuild = [&](const HeightField& base, int sign) {
    Overrides over;
    for (const auto& [v, val] : base.overrides())
      if (!bc.region.contains(v)) over[v] = val;
    for (const Vertex& v : bc.region.verts) {
      const Value sum = f1.value(v) + f2.value(v);
      const Value gv = gnew[lsd.level_of(v)];
      const Value twice = sum + sign * gv;
      if (twice % 2 != 0)
        throw ValidationError("swap produced a non-integer height");
      over[v] = twice / 2;
    }
    return HeightField(base.slope(), base.offset(), std::move(over));
  };
  return {rebuild(f1, +1), rebuild(f2, -1)};
}

std::pair<HeightField, HeightField> rerandomize(const FixedBoundary& bc,
                                                const HeightField& f1,
                                                const HeightField& f2,
                                                const CounterRng& rng,
                                                uint64_t counter) {
  const BoundaryGraph graph = difference_support(bc, f1, f2);
  SwapMask mask;
  for (size_t b = 0; b < graph.boundary_count(); ++b) {
    if (rng.at(17, counter * 1024 + b) < (uint64_t(1) << 63))
      mask.insert(static_cast<int>(b));
  }
  return swap_pair(bc, f1, f2, mask);
}

namespace {

IdentityReport identity_exact(const FixedBoundary& bc, const WeightFunction& w,
                              const Vertex& x, const Vertex* y, size_t cap) {
  check_fixed_boundary(bc, /*require_region=*/true);
  if (bc.region.contains(Vertex::origin(bc.dim())))
    throw ValidationError("identity requires a region not containing 0");
  const int d = bc.dim();
  const std::vector<HeightField> fields = collect_fields(bc, cap);
  std::vector<Rat> mass;
  mass.reserve(fields.size());
  Rat z(0);
  for (const HeightField& f : fields) {
    mass.push_back(boltzmann_mass(f, bc, w));
    z += mass.back();
  }

  IdentityReport rep;
  // Exact moment side.
  Rat ex(0), ey(0), exy(0);
  for (size_t i = 0; i < fields.size(); ++i) {
    const Rat px = rat_of(fields[i].value(x));
    const Rat py = rat_of(fields[i].value(y ? *y : x));
    ex += mass[i] * px;
    ey += mass[i] * py;
    exy += mass[i] * px * py;
  }
  ex /= z;
  ey /= z;
  exy /= z;
  rep.lhs = exy - ex * ey;

  // Geometric side: expectation of the separation depth over ordered pairs.
  Rat expected_depth(0);
  for (size_t i = 0; i < fields.size(); ++i) {
    for (size_t j = 0; j < fields.size(); ++j) {
      const LevelSetDecomposition lsd = build_lsd(bc, fields[i], fields[j]);
      const int depth = y ? lsd_distance_to(lsd, meet_vertex(lsd, x, *y))
                          : lsd_distance(lsd, x);
      if (depth > 0) expected_depth += mass[i] * mass[j] * depth;
    }
  }
  expected_depth /= z * z;
  rep.rhs = make_rat((d + 1) * (d + 1), 2) * expected_depth;
  rep.equal = (rep.lhs == rep.rhs);
  return rep;
}

}  // namespace

IdentityReport variance_identity_exact(const FixedBoundary& bc,
                                       const WeightFunction& w, const Vertex& x,
                                       size_t cap) {
  return identity_exact(bc, w, x, nullptr, cap);
}

IdentityReport covariance_identity_exact(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, const Vertex& y,
                                         size_t cap) {
  return identity_exact(bc, w, x, &y, cap);
}

namespace {

EstimatorReport estimate_identity(const FixedBoundary& bc,
                                  const WeightFunction& w, const Vertex& x,
                                  const Vertex* y, uint64_t samples,
                                  uint64_t seed) {
  check_fixed_boundary(bc, /*require_region=*/true);
  const int d = bc.dim();
  EstimatorReport rep;
  rep.samples = samples;

  std::vector<double> fx, fy, depth;
  fx.reserve(samples);
  fy.reserve(samples);
  depth.reserve(samples);
  for (uint64_t i = 0; i < samples; ++i) {
    HeightField f1, f2;
    if (w.is_uniform()) {
      f1 = cftp_sample(bc, seed * 2 + 4 * i).sample;
      f2 = cftp_sample(bc, seed * 2 + 4 * i + 2).sample;
    } else {
      const uint64_t burn = 200 * bc.region.size() + 50;
      f1 = glauber_run(bc, w, burn, seed * 2 + 4 * i);
      f2 = glauber_run(bc, w, burn, seed * 2 + 4 * i + 2);
    }
    fx.push_back(static_cast<double>(f1.value(x)));
    fy.push_back(static_cast<double>(f1.value(y ? *y : x)));
    const LevelSetDecomposition lsd = build_lsd(bc, f1, f2);
    depth.push_back(static_cast<double>(
        y ? lsd_distance_to(lsd, meet_vertex(lsd, x, *y))
          : lsd_distance(lsd, x)));
  }

  auto mean_se = [](const std::vector<double>& v) {
    double mean = 0;
    for (double t : v) mean += t;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double t : v) var += (t - mean) * (t - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::pair<double, double>(
        mean, std::sqrt(var / static_cast<double>(v.size())));
  };
  const auto [mx, sx] = mean_se(fx);
  const auto [my, sy] = mean_se(fy);
  (void)sx;
  (void)sy;
  double cov = 0;
  for (size_t i = 0; i < fx.size(); ++i)
    cov += (fx[i] - mx) * (fy[i] - my);
  cov /= static_cast<double>(fx.size() - 1);
  rep.variance_estimate = cov;
  rep.variance_se =
      std::abs(cov) * std::sqrt(2.0 / static_cast<double>(fx.size() - 1));
  const auto [md, sd] = mean_se(depth);
  const double scale = 0.5 * static_cast<double>((d + 1) * (d + 1));
  rep.rhs_estimate = scale * md;
  rep.rhs_se = scale * sd;
  return rep;
}

}  // namespace

EstimatorReport identity_estimators_mcmc(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, uint64_t samples,
                                         uint64_t seed) {
  return estimate_identity(bc, w, x, nullptr, samples, seed);
}

EstimatorReport identity_estimators_mcmc(const FixedBoundary& bc,
                                         const WeightFunction& w,
                                         const Vertex& x, const Vertex& y,
                                         uint64_t samples, uint64_t seed) {
  return estimate_identity(bc, w, x, &y, samples, seed);
}

}  // namespace shf
