#include "shf/regions.hpp"

#include <algorithm>
#include <deque>

namespace shf {

void check_fixed_boundary(const FixedBoundary& bc, bool require_region) {
  if (bc.region.d != bc.reference.dim())
    throw ValidationError("region/reference dimension mismatch");
  if (!is_height_function(bc.reference))
    throw ValidationError("reference is not a height function");
  if (require_region && !complement_connected(bc.region))
    throw ValidationError("complement of R is not connected");
}

namespace {

Overrides off_region_overrides(const FixedBoundary& bc) {
  Overrides over;
  for (const auto& [v, val] : bc.reference.overrides())
    if (!bc.region.contains(v)) over[v] = val;
  return over;
}

struct ExtremalBounds {
  std::vector<Value> fmin, fmax;  // indexed like bc.region.verts
};

ExtremalBounds extremal_bounds(const FixedBoundary& bc) {
  const std::vector<Vertex> bdry = region_boundary(bc.region);
  ExtremalBounds out;
  out.fmin.reserve(bc.region.size());
  out.fmax.reserve(bc.region.size());
  for (const Vertex& x : bc.region.verts) {
    Value lo = 0, hi = 0;
    bool first = true;
    for (const Vertex& y : bdry) {
      const Value by = bc.reference.value(y);
      const Value up = by + plus_norm(vertex_sub(x, y));
      const Value dn = by - plus_norm(vertex_sub(y, x));
      if (first) {
        lo = dn;
        hi = up;
        first = false;
      } else {
        lo = std::max(lo, dn);
        hi = std::min(hi, up);
      }
    }
    if (first) throw ValidationError("region has no boundary");
    out.fmin.push_back(lo);
    out.fmax.push_back(hi);
  }
  return out;
}

HeightField extremal_field(const FixedBoundary& bc, bool take_max) {
  check_fixed_boundary(bc);
  const ExtremalBounds b = extremal_bounds(bc);
  Overrides over = off_region_overrides(bc);
  for (size_t i = 0; i < bc.region.size(); ++i)
    over[bc.region.verts[i]] = take_max ? b.fmax[i] : b.fmin[i];
  return HeightField(bc.reference.slope(), bc.reference.offset(),
                     std::move(over));
}

// Depth-first assignment over R in BFS-from-boundary order, pruning with
// interval tightening; the interval-with-parity representation is exact for
// the two-value gradient constraint, so completed branches are exactly the
// members of Omega(R, b).
struct Enumerator {
  int d;
  std::vector<Vertex> order;
  std::vector<int> par;
  std::vector<Value> lo, hi;
  struct Peer {
    int idx;
    bool up;  // peer = vertex + g_i
  };
  std::vector<std::vector<Peer>> peers;
  std::vector<Value> vals;
  std::function<void(const std::vector<Vertex>&, const std::vector<Value>&)>
      on_leaf;

  Enumerator(const FixedBoundary& bc, size_t cap) {
    d = bc.dim();
    if (bc.region.size() > cap)
      throw CapExceeded("enumeration cap exceeded: " +
                        std::to_string(bc.region.size()) + " free vertices");
    check_fixed_boundary(bc);

    // BFS layers from the boundary, ties broken lexicographically.
    std::unordered_map<Vertex, int, VertexHash> pos;
    for (size_t i = 0; i < bc.region.size(); ++i)
      pos[bc.region.verts[i]] = static_cast<int>(i);
    std::vector<int> layer(bc.region.size(), -1);
    std::deque<int> queue;
    for (size_t i = 0; i < bc.region.size(); ++i) {
      for (const Vertex& u : neighbors(bc.region.verts[i])) {
        if (!bc.region.contains(u)) {
          layer[i] = 0;
          queue.push_back(static_cast<int>(i));
          break;
        }
      }
    }
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      for (const Vertex& u : neighbors(bc.region.verts[i])) {
        auto it = pos.find(u);
        if (it != pos.end() && layer[it->second] < 0) {
          layer[it->second] = layer[i] + 1;
          queue.push_back(it->second);
        }
      }
    }
    std::vector<int> idx(bc.region.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return layer[a] < layer[b]; });

    const ExtremalBounds eb = extremal_bounds(bc);
    order.reserve(idx.size());
    for (int i : idx) order.push_back(bc.region.verts[i]);
    std::unordered_map<Vertex, int, VertexHash> slot;
    for (size_t i = 0; i < order.size(); ++i)
      slot[order[i]] = static_cast<int>(i);

    lo.resize(order.size());
    hi.resize(order.size());
    par.resize(order.size());
    peers.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
      const int orig = idx[i];
      lo[i] = eb.fmin[orig];
      hi[i] = eb.fmax[orig];
      par[i] = parity(order[i]);
      for (int dir = 1; dir <= d + 1; ++dir) {
        for (int sign : {+1, -1}) {
          const Vertex u = order[i].offset(dir, sign);
          auto it = slot.find(u);
          if (it != slot.end())
            peers[i].push_back(Peer{it->second, sign > 0});
        }
      }
    }
    vals.assign(order.size(), 0);
  }

  struct TrailEntry {
    int idx;
    Value lo, hi;
  };

  void run() {
    std::vector<TrailEntry> trail;
    dfs(0, trail);
  }

  void dfs(size_t i, std::vector<TrailEntry>& trail) {
    if (i == order.size()) {
      on_leaf(order, vals);
      return;
    }
    Value v = lo[i];
    const Value rem = ((par[i] - v) % (d + 1) + (d + 1)) % (d + 1);
    v += rem;
    for (; v <= hi[i]; v += d + 1) {
      vals[i] = v;
      const size_t mark = trail.size();
      bool feasible = true;
      for (const Peer& p : peers[i]) {
        if (p.idx <= static_cast<int>(i)) continue;  // already assigned
        // Peer above: value in [v-d, v+1]; peer below: value in [v-1, v+d].
        const Value plo = p.up ? v - d : v - 1;
        const Value phi = p.up ? v + 1 : v + d;
        if (lo[p.idx] < plo || hi[p.idx] > phi) {
          trail.push_back({p.idx, lo[p.idx], hi[p.idx]});
          lo[p.idx] = std::max(lo[p.idx], plo);
          hi[p.idx] = std::min(hi[p.idx], phi);
          if (lo[p.idx] > hi[p.idx]) feasible = false;
        }
        if (!feasible) break;
      }
      if (feasible) dfs(i + 1, trail);
      while (trail.size() > mark) {
        lo[trail.back().idx] = trail.back().lo;
        hi[trail.back().idx] = trail.back().hi;
        trail.pop_back();
      }
    }
  }
};

}  // namespace

HeightField extremal_max(const FixedBoundary& bc) {
  return extremal_field(bc, true);
}

HeightField extremal_min(const FixedBoundary& bc) {
  return extremal_field(bc, false);
}

void enumerate_fields(const FixedBoundary& bc,
                      const std::function<void(const HeightField&)>& emit,
                      size_t cap) {
  Enumerator en(bc, cap);
  const Overrides base = off_region_overrides(bc);
  en.on_leaf = [&](const std::vector<Vertex>& vs,
                   const std::vector<Value>& vals) {
    Overrides over = base;
    for (size_t i = 0; i < vs.size(); ++i) over[vs[i]] = vals[i];
    emit(HeightField(bc.reference.slope(), bc.reference.offset(),
                     std::move(over)));
  };
  en.run();
}

std::vector<HeightField> collect_fields(const FixedBoundary& bc, size_t cap) {
  std::vector<HeightField> out;
  enumerate_fields(bc, [&](const HeightField& f) { out.push_back(f); }, cap);
  return out;
}

Int count_fields(const FixedBoundary& bc, size_t cap) {
  Enumerator en(bc, cap);
  Int count = 0;
  en.on_leaf = [&](const std::vector<Vertex>&, const std::vector<Value>&) {
    ++count;
  };
  en.run();
  return count;
}

Rat boltzmann_mass(const HeightField& g, const FixedBoundary& bc,
                   const WeightFunction& w) {
  const int d = bc.dim();
  Rat mass(1);
  for (const Edge& e : incident_edges(bc.region)) {
    if (gradient(g, e) == -d) mass *= w.at(e);
  }
  return mass;
}

Rat partition_function(const FixedBoundary& bc, const WeightFunction& w,
                       size_t cap) {
  Rat z(0);
  enumerate_fields(
      bc, [&](const HeightField& g) { z += boltzmann_mass(g, bc, w); }, cap);
  return z;
}

bool validate_periodic(const PeriodicBoundary& pbc) {
  if (pbc.d < 2 || pbc.n < 1) return false;
  if (pbc.slope.dim() != pbc.d) return false;
  return pbc.slope.in_sn(pbc.n);
}

TorusState::TorusState(PeriodicBoundary pbc, std::vector<Value> vals)
    : pbc_(std::move(pbc)), vals_(std::move(vals)) {
  const int N = pbc_.period();
  size_t want = 1;
  for (int i = 0; i < pbc_.d; ++i) want *= static_cast<size_t>(N);
  if (vals_.size() != want)
    throw ValidationError("torus state has wrong fundamental-domain size");
  wrap_offset_.resize(pbc_.d);
  for (int i = 0; i < pbc_.d; ++i) {
    Rat t = pbc_.slope.g[i] * N;
    if (t.get_den() != 1)
      throw ValidationError("slope is not integral on the torus lattice");
    wrap_offset_[i] = to_value(Int(t.get_num()));
  }
}

size_t TorusState::index_of(const std::vector<int>& coords) const {
  const int N = period();
  size_t idx = 0;
  for (int i = pbc_.d - 1; i >= 0; --i) {
    const int c = ((coords[i] % N) + N) % N;
    idx = idx * static_cast<size_t>(N) + static_cast<size_t>(c);
  }
  return idx;
}

std::vector<int> TorusState::coords_of(size_t idx) const {
  const int N = period();
  std::vector<int> c(pbc_.d);
  for (int i = 0; i < pbc_.d; ++i) {
    c[i] = static_cast<int>(idx % static_cast<size_t>(N));
    idx /= static_cast<size_t>(N);
  }
  return c;
}

std::pair<size_t, Value> TorusState::neighbor(size_t idx, int dir,
                                              int sign) const {
  const int N = period();
  std::vector<int> c = coords_of(idx);
  if (dir <= pbc_.d) {
    c[dir - 1] += sign;
  } else {
    for (int& x : c) x -= sign;
  }
  Value off = 0;
  for (int i = 0; i < pbc_.d; ++i) {
    int k = 0;
    while (c[i] < 0) c[i] += N, --k;
    while (c[i] >= N) c[i] -= N, ++k;
    if (k != 0) off += static_cast<Value>(k) * wrap_offset_[i];
  }
  return {index_of(c), off};
}

TorusState TorusState::initial(const PeriodicBoundary& pbc) {
  if (!validate_periodic(pbc))
    throw ValidationError("invalid periodic boundary conditions");
  const int N = pbc.period();
  const int d = pbc.d;
  std::vector<Value> ns(d);  // s(N g_i), integral
  for (int i = 0; i < d; ++i) {
    Rat t = pbc.slope.g[i] * N;
    ns[i] = to_value(Int(t.get_num()));
  }
  size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<size_t>(N);

  for (int K = 2; K <= 8; K *= 2) {
    std::vector<Value> vals(total);
    std::vector<int> z(d, 0);
    for (size_t idx = 0; idx < total; ++idx) {
      // z runs over the fundamental domain in index order.
      size_t rest = idx;
      for (int i = 0; i < d; ++i) {
        z[i] = static_cast<int>(rest % static_cast<size_t>(N));
        rest /= static_cast<size_t>(N);
      }
      Value best = 0;
      bool first = true;
      std::vector<int> k(d, -K);
      for (;;) {
        Value cand = 0;
        long long sum = 0, mn = 0;
        for (int i = 0; i < d; ++i) {
          cand += static_cast<Value>(k[i]) * ns[i];
          const long long diff = z[i] - static_cast<long long>(k[i]) * N;
          sum += diff;
          mn = std::min(mn, diff);  // last coordinate of the rep is 0
        }
        cand += sum - static_cast<long long>(d + 1) * mn;
        if (first || cand < best) best = cand, first = false;
        int i = 0;
        while (i < d && k[i] == K) k[i] = -K, ++i;
        if (i == d) break;
        ++k[i];
      }
      vals[idx] = best;
    }
    TorusState st(pbc, std::move(vals));
    if (torus_validate(st)) return st;
  }
  throw ValidationError("could not construct a valid periodic initial state");
}

TorusState TorusState::normalized() const {
  TorusState st = *this;
  const Value at0 = vals_[index_of(std::vector<int>(pbc_.d, 0))];
  for (Value& v : st.vals_) v -= at0;
  return st;
}

bool torus_validate(const TorusState& st) {
  if (!validate_periodic(st.pbc())) return false;
  const int d = st.pbc().d;
  for (size_t idx = 0; idx < st.size(); ++idx) {
    const std::vector<int> c = st.coords_of(idx);
    long long sum = 0;
    for (int x : c) sum += x;
    const int par = static_cast<int>(((sum % (d + 1)) + d + 1) % (d + 1));
    if (((st.value_at(idx) % (d + 1)) + d + 1) % (d + 1) != par) return false;
    for (int dir = 1; dir <= d + 1; ++dir) {
      const auto [nidx, off] = st.neighbor(idx, dir, +1);
      const Value grad = st.value_at(nidx) + off - st.value_at(idx);
      if (grad != 1 && grad != -d) return false;
    }
  }
  return true;
}

}  // namespace shf
