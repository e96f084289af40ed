#include "shf/kasteleyn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace shf {

DualHyperedge dual_edge(const Edge& e) {
  return DualHyperedge{e, loops_through(e)};
}

std::vector<DualHyperedge> matching_of_tiling(const Tiling& t) {
  std::vector<Edge> tiles(t.tiles.begin(), t.tiles.end());
  std::sort(tiles.begin(), tiles.end());
  std::vector<DualHyperedge> out;
  out.reserve(tiles.size());
  for (const Edge& e : tiles) out.push_back(dual_edge(e));
  return out;
}

bool is_partition_of_loops(const std::vector<DualHyperedge>& matching,
                           const std::vector<UnrootedLoop>& loops) {
  std::map<UnrootedLoop, int> covered;
  for (const DualHyperedge& h : matching)
    for (const UnrootedLoop& s : h.loops) covered[s] += 1;
  for (const UnrootedLoop& s : loops) {
    auto it = covered.find(s);
    if (it == covered.end() || it->second != 1) return false;
  }
  return true;
}

std::vector<UnrootedLoop> loops_of_region(const Region& r) {
  std::vector<UnrootedLoop> out;
  std::set<UnrootedLoop> seen;
  for (const Edge& e : incident_edges(r)) {
    for (const UnrootedLoop& s : loops_through(e)) {
      if (seen.insert(s).second) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int IndexSets::index_in_class(int cls, const UnrootedLoop& s) const {
  const auto& v = classes[cls];
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.end() || !(*it == s)) return -1;
  return static_cast<int>(it - v.begin());
}

IndexSets build_index_sets(const FixedBoundary& bc) {
  check_fixed_boundary(bc, /*require_region=*/true);
  const int d = bc.dim();
  const Tiling t = tiling_of(bc.reference);

  IndexSets out;
  out.d = d;
  const auto perms = permutations_lex(d);
  std::map<std::vector<int>, int> class_of_xi;
  for (size_t i = 0; i < perms.size(); ++i)
    class_of_xi[perms[i]] = static_cast<int>(i);
  out.classes.resize(perms.size());

  // A loop belongs to X_i iff its unique tiling edge lies in E^d(R); it is
  // then collected from that edge, so each loop appears exactly once.
  for (const Edge& e : incident_edges(bc.region)) {
    const Value a = t.alpha(e);
    if (a != -d) continue;
    for (const UnrootedLoop& s : loops_through(e)) {
      out.classes[class_of_xi.at(s.xi)].push_back(s);
    }
  }
  for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
  out.n = out.classes.empty() ? 0 : out.classes[0].size();
  for (const auto& cls : out.classes)
    if (cls.size() != out.n)
      throw ValidationError("index sets have unequal sizes");
  return out;
}

Hypermatrix build_hypermatrix(const FixedBoundary& bc,
                              const WeightFunction& w) {
  const IndexSets xs = build_index_sets(bc);
  const int rank = static_cast<int>(xs.classes.size());

  Hypermatrix a;
  a.rank = rank;
  a.n = static_cast<int>(xs.n);
  for (const Edge& e : incident_edges(bc.region)) {
    std::vector<int> idx(rank);
    bool ok = true;
    const auto loops = loops_through(e);
    for (int cls = 0; cls < rank; ++cls) {
      const int pos = xs.index_in_class(cls, loops[cls]);
      if (pos < 0) {
        ok = false;
        break;
      }
      idx[cls] = pos;
    }
    if (!ok) continue;
    a.entries.push_back(Hypermatrix::Entry{std::move(idx), w.at(e)});
  }
  std::sort(a.entries.begin(), a.entries.end(),
            [](const Hypermatrix::Entry& x, const Hypermatrix::Entry& y) {
              return x.idx < y.idx;
            });
  return a;
}

namespace {

int permutation_sign(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  int sign = 1;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    size_t len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<size_t>(p[j]);
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

struct BruteForce {
  const Hypermatrix& a;
  int n, rank;
  std::vector<std::vector<const Hypermatrix::Entry*>> slices;  // by idx[0]
  std::vector<std::vector<bool>> used;          // per axis >= 1
  std::vector<std::vector<int>> sigma;          // sigma[i][k], axes >= 1
  std::vector<const Hypermatrix::Entry*> chosen;
  HyperdetResult result;

  explicit BruteForce(const Hypermatrix& m) : a(m), n(m.n), rank(m.rank) {
    slices.resize(static_cast<size_t>(std::max(n, 1)));
    for (const auto& e : a.entries)
      slices[static_cast<size_t>(e.idx[0])].push_back(&e);
    used.assign(static_cast<size_t>(rank),
                std::vector<bool>(static_cast<size_t>(std::max(n, 1)), false));
    sigma.assign(static_cast<size_t>(rank), std::vector<int>(std::max(n, 1), 0));
    result.det = Rat(0);
    result.nonzero_terms = 0;
  }

  void recurse(int k) {
    if (k == n) {
      Rat term(1);
      for (const auto* e : chosen) term *= e->value;
      int sign = 1;
      for (int i = 1; i < rank; ++i) sign *= permutation_sign(sigma[i]);
      if (sign < 0) term = -term;
      const int term_sign = sgn(term);
      if (term_sign != 0) {
        if (result.sign == 0)
          result.sign = term_sign;
        else if (result.sign != term_sign)
          result.sign_uniform = false;
        result.det += term;
        ++result.nonzero_terms;
      }
      return;
    }
    for (const auto* e : slices[static_cast<size_t>(k)]) {
      bool free = true;
      for (int i = 1; i < rank; ++i)
        if (used[i][static_cast<size_t>(e->idx[i])]) {
          free = false;
          break;
        }
      if (!free) continue;
      for (int i = 1; i < rank; ++i) {
        used[i][static_cast<size_t>(e->idx[i])] = true;
        sigma[i][k] = e->idx[i];
      }
      chosen.push_back(e);
      recurse(k + 1);
      chosen.pop_back();
      for (int i = 1; i < rank; ++i)
        used[i][static_cast<size_t>(e->idx[i])] = false;
    }
  }

  static int sgn(const Rat& r) {
    return mpq_sgn(r.get_mpq_t());
  }
};

}  // namespace

HyperdetResult hyperdet_bruteforce(const Hypermatrix& a) {
  if (a.rank % 2 != 0)
    throw ValidationError("hyperdeterminant requires even rank");
  // Work cap: (n!)^(rank-1) <= 1e8, compared in logs.
  double log_work = 0;
  for (int k = 2; k <= a.n; ++k) log_work += std::log10(static_cast<double>(k));
  log_work *= a.rank - 1;
  if (log_work > 8.0)
    throw CapExceeded("hyperdeterminant work cap exceeded");
  BruteForce bf(a);
  if (a.n == 0) {
    bf.result.det = Rat(1);
    bf.result.nonzero_terms = 1;
    bf.result.sign = 1;
    return bf.result;
  }
  bf.recurse(0);
  return bf.result;
}

Rat det_elimination(const std::vector<std::vector<Rat>>& m) {
  const size_t n = m.size();
  std::vector<std::vector<Rat>> a = m;
  Rat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rat(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      const Rat factor = a[row][col] / a[col][col];
      for (size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
    }
  }
  return det;
}

Rat hyperdet(const Hypermatrix& a) {
  if (a.rank % 2 != 0)
    throw ValidationError("hyperdeterminant requires even rank");
  if (a.rank == 2) {
    std::vector<std::vector<Rat>> m(static_cast<size_t>(a.n),
                                    std::vector<Rat>(static_cast<size_t>(a.n),
                                                     Rat(0)));
    for (const auto& e : a.entries)
      m[static_cast<size_t>(e.idx[0])][static_cast<size_t>(e.idx[1])] += e.value;
    return det_elimination(m);
  }
  return hyperdet_bruteforce(a).det;
}

KasteleynReport verify_kasteleyn(const FixedBoundary& bc,
                                 const WeightFunction& w, size_t cap) {
  const Hypermatrix k = build_hypermatrix(bc, w);
  KasteleynReport rep;
  rep.n = static_cast<size_t>(k.n);
  rep.rank = k.rank;
  rep.z = partition_function(bc, w, cap);
  const HyperdetResult hd = hyperdet_bruteforce(k);
  rep.det = hd.det;
  rep.sign = hd.sign;
  rep.sign_uniform = hd.sign_uniform;
  if (k.rank == 2) {
    // Cross-check the brute force against exact elimination.
    if (hyperdet(k) != hd.det)
      throw ValidationError("determinant routes disagree");
  }
  Rat mag = rep.det >= 0 ? rep.det : Rat(-rep.det);
  rep.equal = (mag == rep.z);
  return rep;
}

}  // namespace shf
